import { describe, expect, it } from "vitest";

import {
  composeRequest,
  decode,
  encode,
  Envelope,
  exportWorkspace,
  importWorkspace,
  isFault,
  Workspace,
} from "../src/protocol";

const RUN: Envelope = {
  type: "run",
  id: "42",
  payload: {
    language: "asp",
    engine: "builtin",
    options: [{ name: "filter", values: ["color"] }],
    sources: ["a :- b.\n", "b."],
  },
};

// The exact frame the server produces for the same message: client-sent
// envelope types carry no numbers, so the bytes must match across languages.
const RUN_WIRE =
  '{"type":"run","id":"42","payload":{"language":"asp","engine":"builtin",' +
  '"options":[{"name":"filter","values":["color"]}],"sources":["a :- b.\\n","b."]}}';

describe("envelope encoding", () => {
  it("produces the canonical wire form", () => {
    expect(encode(RUN)).toBe(RUN_WIRE);
  });

  it("encodes empty payloads for ping and list_engines", () => {
    expect(encode({ type: "ping", id: "p", payload: null })).toBe(
      '{"type":"ping","id":"p","payload":{}}',
    );
    expect(encode({ type: "list_engines", id: "e", payload: null })).toBe(
      '{"type":"list_engines","id":"e","payload":{}}',
    );
  });

  it("round-trips through decode", () => {
    const decoded = decode(encode(RUN));
    expect(decoded).toEqual(RUN);
    expect(encode(decoded as Envelope)).toBe(RUN_WIRE);
  });
});

describe("envelope decoding", () => {
  it("parses a result reply", () => {
    const frame =
      '{"type":"result","id":"42","payload":{"model":"Answer set 1\\n{a}","error":""}}';
    expect(decode(frame)).toEqual({
      type: "result",
      id: "42",
      payload: { model: "Answer set 1\n{a}", error: "" },
    });
  });

  it("parses an engines listing with float timeouts", () => {
    const frame =
      '{"type":"engines","id":"e","payload":{"engines":[{"language":"asp",' +
      '"engine":"builtin","kind":"builtin","allowed_options":["filter"],' +
      '"default_timeout":20.0}]}}';
    const decoded = decode(frame) as Envelope;
    expect(isFault(decoded)).toBe(false);
    expect(decoded.payload).toEqual({
      engines: [
        {
          language: "asp",
          engine: "builtin",
          kind: "builtin",
          allowed_options: ["filter"],
          default_timeout: 20,
        },
      ],
    });
  });

  it.each([
    ["not json at all", "frame is not valid JSON"],
    ["[1,2]", "frame must be a JSON object"],
    ['{"id":"1","payload":{}}', "envelope.type is missing"],
    ['{"type":"shout","id":"1","payload":{}}', "unknown envelope type"],
    ['{"type":"run","id":7,"payload":{}}', "envelope.id has the wrong type"],
    ['{"type":"run","id":"1","payload":{}}', "payload.language is missing"],
    [
      '{"type":"problem","id":"1","payload":{"code":"nope","detail":"x"}}',
      "not a known problem code",
    ],
  ])("faults on %s", (frame, detail) => {
    const got = decode(frame);
    expect(isFault(got)).toBe(true);
    if (isFault(got)) expect(got.detail).toContain(detail);
  });

  it("never throws on binary-ish garbage", () => {
    for (let i = 0; i < 200; i += 1) {
      let junk = "";
      for (let j = 0; j < 40; j += 1) {
        junk += String.fromCharCode(Math.floor(Math.random() * 0x300));
      }
      expect(() => decode(junk)).not.toThrow();
    }
  });
});

function sampleWorkspace(): Workspace {
  return {
    version: 1,
    tabs: [
      { name: "base", text: "a :- not b.", run_selected: true },
      { name: "extra", text: "b :- not a.", run_selected: false },
      { name: "third", text: ":- a.", run_selected: true },
    ],
    settings: {
      language: "asp",
      engine: "builtin",
      options: [{ name: "filter", values: ["a", "b"] }],
      auto_run: true,
      layout: { theme: "dark", options_panel: "open" },
    },
    last_output: { model: "INCOHERENT", error: "" },
  };
}

describe("workspace files", () => {
  it("compose uses the selected tabs in tab order", () => {
    const req = composeRequest(sampleWorkspace());
    expect(req.sources).toEqual(["a :- not b.", ":- a."]);
    expect(req.engine).toBe("builtin");
    expect(req.options).toEqual([{ name: "filter", values: ["a", "b"] }]);
  });

  it("export emits canonical key order with sorted layout", () => {
    const doc = JSON.parse(exportWorkspace(sampleWorkspace()));
    expect(Object.keys(doc)).toEqual(["version", "tabs", "settings", "last_output"]);
    expect(Object.keys(doc.settings.layout)).toEqual(["options_panel", "theme"]);
  });

  it("omits last_output when null", () => {
    const ws = sampleWorkspace();
    ws.last_output = null;
    expect(exportWorkspace(ws)).not.toContain("last_output");
  });

  it("round-trips", () => {
    const ws = sampleWorkspace();
    const back = importWorkspace(exportWorkspace(ws));
    expect(back).toEqual(ws);
  });

  it("names the offending field", () => {
    const doc = JSON.parse(exportWorkspace(sampleWorkspace()));
    doc.tabs[1].name = "base"; // duplicate
    const got = importWorkspace(JSON.stringify(doc));
    expect(isFault(got)).toBe(true);
    if (isFault(got)) expect(got.detail).toContain("workspace.tabs[1].name");
  });

  it("rejects other versions", () => {
    const doc = JSON.parse(exportWorkspace(sampleWorkspace()));
    doc.version = 2;
    expect(isFault(importWorkspace(JSON.stringify(doc)))).toBe(true);
  });
});
