import { describe, expect, it } from "vitest";
import { StringStream } from "@codemirror/language";

import { aspParser, codeMirrorEditor } from "../src/cmeditor";

/** Run the stream tokenizer over one line, returning [style, text] pairs. */
function tokenize(line: string): Array<[string | null, string]> {
  const stream = new StringStream(line, 4, 2);
  const state = {};
  const tokens: Array<[string | null, string]> = [];
  while (!stream.eol()) {
    stream.start = stream.pos;
    const style = aspParser.token(stream, state);
    tokens.push([style, stream.current()]);
  }
  return tokens;
}

function styled(line: string): Array<[string, string]> {
  return tokenize(line).filter((t): t is [string, string] => t[0] !== null);
}

describe("asp stream tokenizer", () => {
  it("classifies a rule with negation and a trailing comment", () => {
    expect(styled("a :- not b. % hi")).toEqual([
      ["atom", "a"],
      ["operator", ":-"],
      ["keyword", "not"],
      ["atom", "b"],
      ["punctuation", "."],
      ["comment", "% hi"],
    ]);
  });

  it("classifies variables, constants, and arguments", () => {
    expect(styled("color(X, red) :- node(X).")).toEqual([
      ["atom", "color"],
      ["punctuation", "("],
      ["variableName", "X"],
      ["punctuation", ","],
      ["atom", "red"],
      ["punctuation", ")"],
      ["operator", ":-"],
      ["atom", "node"],
      ["punctuation", "("],
      ["variableName", "X"],
      ["punctuation", ")"],
      ["punctuation", "."],
    ]);
  });

  it("classifies disjunction, numbers, and comparisons", () => {
    expect(styled("p(1) | q(-2) :- X != Y, N >= 3.")).toEqual([
      ["atom", "p"],
      ["punctuation", "("],
      ["number", "1"],
      ["punctuation", ")"],
      ["punctuation", "|"],
      ["atom", "q"],
      ["punctuation", "("],
      ["number", "-2"],
      ["punctuation", ")"],
      ["operator", ":-"],
      ["variableName", "X"],
      ["operator", "!="],
      ["variableName", "Y"],
      ["punctuation", ","],
      ["variableName", "N"],
      ["operator", ">="],
      ["number", "3"],
      ["punctuation", "."],
    ]);
  });

  it("keywords only match whole words; underscore starts a variable", () => {
    expect(styled("notx(_Thing).")).toEqual([
      ["atom", "notx"],
      ["punctuation", "("],
      ["variableName", "_Thing"],
      ["punctuation", ")"],
      ["punctuation", "."],
    ]);
  });

  it("a full-line comment is one token", () => {
    expect(styled("% node(1..3) would be nice")).toEqual([
      ["comment", "% node(1..3) would be nice"],
    ]);
  });

  it("whitespace and unknown characters style as null without stalling", () => {
    const tokens = tokenize("a ?& b");
    expect(tokens.map(([, text]) => text).join("")).toBe("a ?& b");
    expect(tokens.filter(([style]) => style === null).length).toBeGreaterThan(0);
  });
});

describe("codemirror editor host", () => {
  it("creates, edits, notifies, and destroys", () => {
    const mount = document.createElement("div");
    document.body.appendChild(mount);
    const host = codeMirrorEditor(mount, "a.");
    try {
      expect(host.getText()).toBe("a.");
      let changes = 0;
      host.onChange(() => (changes += 1));
      host.setText("b :- a.");
      expect(host.getText()).toBe("b :- a.");
      expect(changes).toBe(1);
    } finally {
      host.destroy();
      mount.remove();
    }
  });
});
