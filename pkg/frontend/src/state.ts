/**
 * UI state: the workspace plus transient run/connection bookkeeping, and
 * its persistence in browser local storage.
 */

import { importWorkspace, isFault, Workspace } from "./protocol";

export const STORAGE_KEY = "loide.workspace.v1";

export type Connection = "connected" | "reconnecting" | "offline";

export interface UiState {
  workspace: Workspace;
  connection: Connection;
  /** Predicate name currently highlighted; always present in the shown
   * output, or null. */
  highlightName: string | null;
  /** Correlation ids of runs awaiting their single terminal reply. */
  busyRuns: Set<string>;
}

const SAMPLE_PROGRAM = `% Three-coloring of a triangle.
node(1). node(2). node(3).
edge(1,2). edge(2,3). edge(1,3).
col(red). col(green). col(blue).
color(N,red) | color(N,green) | color(N,blue) :- node(N).
:- edge(X,Y), color(X,C), color(Y,C).
`;

export function defaultWorkspace(): Workspace {
  return {
    version: 1,
    tabs: [{ name: "program", text: SAMPLE_PROGRAM, run_selected: true }],
    settings: {
      language: "asp",
      engine: "builtin",
      options: [],
      auto_run: false,
      layout: {},
    },
    last_output: null,
  };
}

/** Storage surface we need; `localStorage` satisfies it, tests use a map. */
export interface KeyValueStore {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
  removeItem(key: string): void;
}

/** Restore the persisted workspace; anything corrupted or missing falls
 * back to the defaults without raising. */
export function loadWorkspace(store: KeyValueStore): Workspace {
  let raw: string | null;
  try {
    raw = store.getItem(STORAGE_KEY);
  } catch {
    return defaultWorkspace();
  }
  if (raw === null) return defaultWorkspace();
  const ws = importWorkspace(raw);
  return isFault(ws) ? defaultWorkspace() : ws;
}

export function saveWorkspace(store: KeyValueStore, text: string): void {
  try {
    store.setItem(STORAGE_KEY, text);
  } catch {
    // Storage full or unavailable: the session keeps working unpersisted.
  }
}

export function initialUiState(store: KeyValueStore): UiState {
  return {
    workspace: loadWorkspace(store),
    connection: "offline",
    highlightName: null,
    busyRuns: new Set(),
  };
}
