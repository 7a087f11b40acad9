/**
 * Wire protocol and workspace file format, client side.
 *
 * Mirrors the server's canonical JSON envelope encoding: one JSON object
 * per WebSocket text frame, field order `type, id, payload`, no added
 * whitespace.  `decode` never throws — anything unintelligible comes back
 * as a fault with code `malformed_message`.
 */

export const IDENTIFIER_RE = /^[a-z][a-z0-9_-]*$/;
export const OPTION_NAME_RE = /^[A-Za-z0-9_=/.:+-]+$/;

export const ENVELOPE_TYPES = [
  "run",
  "result",
  "problem",
  "list_engines",
  "engines",
  "ping",
  "pong",
] as const;
export type EnvelopeType = (typeof ENVELOPE_TYPES)[number];

export const PROBLEM_CODES = [
  "parse_error",
  "safety_error",
  "unknown_language",
  "unknown_engine",
  "option_rejected",
  "executor_unavailable",
  "timeout",
  "engine_failure",
  "malformed_message",
] as const;
export type ProblemCode = (typeof PROBLEM_CODES)[number];

export const WORKSPACE_VERSION = 1;

export interface OptionEntry {
  name: string;
  values: string[];
}

export interface RunRequest {
  language: string;
  engine: string;
  options: OptionEntry[];
  sources: string[];
}

export interface RunResult {
  model: string;
  error: string;
}

export interface ProblemReport {
  code: ProblemCode;
  detail: string;
}

export interface EngineInfo {
  language: string;
  engine: string;
  kind: string;
  allowed_options: string[];
  default_timeout: number;
}

export interface EngineListing {
  engines: EngineInfo[];
}

export type Payload =
  | RunRequest
  | RunResult
  | ProblemReport
  | EngineListing
  | null;

export interface Envelope {
  type: EnvelopeType;
  id: string;
  payload: Payload;
}

/** decode()'s failure value: a malformed_message report, not an exception. */
export interface WireFault {
  fault: true;
  code: "malformed_message";
  detail: string;
}

export function wireFault(detail: string): WireFault {
  return { fault: true, code: "malformed_message", detail };
}

export function isFault(value: unknown): value is WireFault {
  return (
    typeof value === "object" &&
    value !== null &&
    (value as { fault?: unknown }).fault === true
  );
}

// --- encoding ---------------------------------------------------------------

function optionDoc(opt: OptionEntry): Record<string, unknown> {
  return { name: opt.name, values: [...opt.values] };
}

function payloadDoc(type: EnvelopeType, payload: Payload): Record<string, unknown> {
  if (payload === null) return {};
  switch (type) {
    case "run": {
      const p = payload as RunRequest;
      return {
        language: p.language,
        engine: p.engine,
        options: p.options.map(optionDoc),
        sources: [...p.sources],
      };
    }
    case "result": {
      const p = payload as RunResult;
      return { model: p.model, error: p.error };
    }
    case "problem": {
      const p = payload as ProblemReport;
      return { code: p.code, detail: p.detail };
    }
    case "engines": {
      const p = payload as EngineListing;
      return {
        engines: p.engines.map((e) => ({
          language: e.language,
          engine: e.engine,
          kind: e.kind,
          allowed_options: [...e.allowed_options],
          default_timeout: e.default_timeout,
        })),
      };
    }
    default:
      return {};
  }
}

/** Canonical serialization; the same message always yields the same text. */
export function encode(message: Envelope): string {
  const doc = {
    type: message.type,
    id: message.id,
    payload: payloadDoc(message.type, message.payload),
  };
  return JSON.stringify(doc);
}

// --- decoding ---------------------------------------------------------------

class Malformed extends Error {}

function require(doc: unknown, key: string, where: string): unknown {
  if (typeof doc !== "object" || doc === null || Array.isArray(doc)) {
    throw new Malformed(`${where} must be an object`);
  }
  if (!(key in doc)) throw new Malformed(`${where}.${key} is missing`);
  return (doc as Record<string, unknown>)[key];
}

function requireString(doc: unknown, key: string, where: string): string {
  const value = require(doc, key, where);
  if (typeof value !== "string") {
    throw new Malformed(`${where}.${key} has the wrong type`);
  }
  return value;
}

function requireBool(doc: unknown, key: string, where: string): boolean {
  const value = require(doc, key, where);
  if (typeof value !== "boolean") {
    throw new Malformed(`${where}.${key} must be a boolean`);
  }
  return value;
}

function requireNumber(doc: unknown, key: string, where: string): number {
  const value = require(doc, key, where);
  if (typeof value !== "number" || Number.isNaN(value)) {
    throw new Malformed(`${where}.${key} must be a number`);
  }
  return value;
}

function requireList(doc: unknown, key: string, where: string): unknown[] {
  const value = require(doc, key, where);
  if (!Array.isArray(value)) throw new Malformed(`${where}.${key} must be a list`);
  return value;
}

function stringList(value: unknown, where: string): string[] {
  if (!Array.isArray(value) || value.some((v) => typeof v !== "string")) {
    throw new Malformed(`${where} must be a list of strings`);
  }
  return [...(value as string[])];
}

function parseOptions(value: unknown, where: string): OptionEntry[] {
  if (!Array.isArray(value)) throw new Malformed(`${where} must be a list`);
  return value.map((doc, i) => {
    const name = requireString(doc, "name", `${where}[${i}]`);
    const values = stringList(
      requireList(doc, "values", `${where}[${i}]`),
      `${where}[${i}].values`,
    );
    if (!name || !OPTION_NAME_RE.test(name)) {
      throw new Malformed(`${where}[${i}].name ${JSON.stringify(name)} is not allowed`);
    }
    return { name, values };
  });
}

function parseRunRequest(doc: unknown, where = "payload"): RunRequest {
  const req: RunRequest = {
    language: requireString(doc, "language", where),
    engine: requireString(doc, "engine", where),
    options: parseOptions(requireList(doc, "options", where), `${where}.options`),
    sources: stringList(requireList(doc, "sources", where), `${where}.sources`),
  };
  if (!IDENTIFIER_RE.test(req.language)) {
    throw new Malformed(`language ${JSON.stringify(req.language)} is not a valid identifier`);
  }
  if (!IDENTIFIER_RE.test(req.engine)) {
    throw new Malformed(`engine ${JSON.stringify(req.engine)} is not a valid identifier`);
  }
  return req;
}

function parseRunResult(doc: unknown, where = "payload"): RunResult {
  return {
    model: requireString(doc, "model", where),
    error: requireString(doc, "error", where),
  };
}

function parseProblem(doc: unknown, where = "payload"): ProblemReport {
  const code = requireString(doc, "code", where);
  const detail = requireString(doc, "detail", where);
  if (!(PROBLEM_CODES as readonly string[]).includes(code)) {
    throw new Malformed(`${where}.code ${JSON.stringify(code)} is not a known problem code`);
  }
  if (!detail) throw new Malformed(`${where}.detail must be non-empty`);
  return { code: code as ProblemCode, detail };
}

function parseEngines(doc: unknown, where = "payload"): EngineListing {
  const entries = requireList(doc, "engines", where);
  return {
    engines: entries.map((entry, i) => {
      const at = `${where}.engines[${i}]`;
      return {
        language: requireString(entry, "language", at),
        engine: requireString(entry, "engine", at),
        kind: requireString(entry, "kind", at),
        allowed_options: stringList(
          requireList(entry, "allowed_options", at),
          `${at}.allowed_options`,
        ),
        default_timeout: requireNumber(entry, "default_timeout", at),
      };
    }),
  };
}

function parsePayload(kind: EnvelopeType, doc: unknown): Payload {
  if (kind === "ping" || kind === "pong" || kind === "list_engines") {
    if (typeof doc !== "object" || doc === null || Array.isArray(doc)) {
      throw new Malformed("payload must be an object");
    }
    return null;
  }
  if (kind === "run") return parseRunRequest(doc);
  if (kind === "result") return parseRunResult(doc);
  if (kind === "problem") return parseProblem(doc);
  return parseEngines(doc);
}

/** Parse one wire frame; returns the envelope or a malformed-message fault. */
export function decode(data: string): Envelope | WireFault {
  let doc: unknown;
  try {
    doc = JSON.parse(data);
  } catch (exc) {
    return wireFault(`frame is not valid JSON: ${(exc as Error).message}`);
  }
  try {
    if (typeof doc !== "object" || doc === null || Array.isArray(doc)) {
      throw new Malformed("frame must be a JSON object");
    }
    const kind = requireString(doc, "type", "envelope");
    if (!(ENVELOPE_TYPES as readonly string[]).includes(kind)) {
      throw new Malformed(`unknown envelope type ${JSON.stringify(kind)}`);
    }
    const ident = requireString(doc, "id", "envelope");
    const payloadDoc = require(doc, "payload", "envelope");
    const payload = parsePayload(kind as EnvelopeType, payloadDoc);
    return { type: kind as EnvelopeType, id: ident, payload };
  } catch (exc) {
    if (exc instanceof Malformed) return wireFault(exc.message);
    throw exc;
  }
}

// --- workspace file format ---------------------------------------------------

export interface Tab {
  name: string;
  text: string;
  run_selected: boolean;
}

export interface Settings {
  language: string;
  engine: string;
  options: OptionEntry[];
  auto_run: boolean;
  layout: Record<string, string>;
}

export interface Workspace {
  version: number;
  tabs: Tab[];
  settings: Settings;
  last_output: RunResult | null;
}

/** Run request for a workspace: the run-selected tabs' texts in tab order. */
export function composeRequest(ws: Workspace): RunRequest {
  return {
    language: ws.settings.language,
    engine: ws.settings.engine,
    options: ws.settings.options.map((o) => ({ name: o.name, values: [...o.values] })),
    sources: ws.tabs.filter((t) => t.run_selected).map((t) => t.text),
  };
}

/** Serialize to the canonical workspace file form (layout keys sorted,
 * last_output omitted when null). */
export function exportWorkspace(ws: Workspace): string {
  const layout: Record<string, string> = {};
  for (const key of Object.keys(ws.settings.layout).sort()) {
    layout[key] = ws.settings.layout[key]!;
  }
  const doc: Record<string, unknown> = {
    version: ws.version,
    tabs: ws.tabs.map((t) => ({
      name: t.name,
      text: t.text,
      run_selected: t.run_selected,
    })),
    settings: {
      language: ws.settings.language,
      engine: ws.settings.engine,
      options: ws.settings.options.map(optionDoc),
      auto_run: ws.settings.auto_run,
      layout,
    },
  };
  if (ws.last_output !== null) {
    doc.last_output = { model: ws.last_output.model, error: ws.last_output.error };
  }
  return JSON.stringify(doc);
}

/** Parse and validate an exported workspace file; reports the first
 * offending field. */
export function importWorkspace(text: string): Workspace | WireFault {
  let doc: unknown;
  try {
    doc = JSON.parse(text);
  } catch (exc) {
    return wireFault(`workspace file is not valid JSON: ${(exc as Error).message}`);
  }
  try {
    const version = requireNumber(doc, "version", "workspace");
    if (!Number.isInteger(version) || version !== WORKSPACE_VERSION) {
      throw new Malformed(`workspace.version ${version} is not supported`);
    }
    const tabs: Tab[] = [];
    const names = new Set<string>();
    const tabDocs = requireList(doc, "tabs", "workspace");
    tabDocs.forEach((tabDoc, i) => {
      const at = `workspace.tabs[${i}]`;
      const name = requireString(tabDoc, "name", at);
      if (!name) throw new Malformed(`${at}.name must be non-empty`);
      if (names.has(name)) {
        throw new Malformed(`${at}.name ${JSON.stringify(name)} duplicates another tab`);
      }
      names.add(name);
      tabs.push({
        name,
        text: requireString(tabDoc, "text", at),
        run_selected: requireBool(tabDoc, "run_selected", at),
      });
    });
    const settingsDoc = require(doc, "settings", "workspace");
    const language = requireString(settingsDoc, "language", "workspace.settings");
    const engine = requireString(settingsDoc, "engine", "workspace.settings");
    if (!IDENTIFIER_RE.test(language)) {
      throw new Malformed(`workspace.settings.language ${JSON.stringify(language)} is invalid`);
    }
    if (!IDENTIFIER_RE.test(engine)) {
      throw new Malformed(`workspace.settings.engine ${JSON.stringify(engine)} is invalid`);
    }
    const options = parseOptions(
      requireList(settingsDoc, "options", "workspace.settings"),
      "workspace.settings.options",
    );
    const autoRun = requireBool(settingsDoc, "auto_run", "workspace.settings");
    const layoutDoc = require(settingsDoc, "layout", "workspace.settings");
    if (typeof layoutDoc !== "object" || layoutDoc === null || Array.isArray(layoutDoc)) {
      throw new Malformed("workspace.settings.layout must be an object");
    }
    const layout: Record<string, string> = {};
    for (const [key, value] of Object.entries(layoutDoc)) {
      if (typeof value !== "string") {
        throw new Malformed("workspace.settings.layout must map strings to strings");
      }
      layout[key] = value;
    }
    const rawLast = (doc as Record<string, unknown>).last_output;
    const lastOutput =
      rawLast === undefined || rawLast === null
        ? null
        : parseRunResult(rawLast, "workspace.last_output");
    return {
      version,
      tabs,
      settings: { language, engine, options, auto_run: autoRun, layout },
      last_output: lastOutput,
    };
  } catch (exc) {
    if (exc instanceof Malformed) return wireFault(exc.message);
    throw exc;
  }
}
