import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import {
  AUTO_RUN_DEBOUNCE_MS,
  AutoRunScheduler,
  endsWithStatement,
} from "../src/autorun";
import { realTimers } from "./helpers";

describe("statement-end detection", () => {
  it.each([
    ["a.", true],
    ["a. ", true],
    ["a.\n", true],
    ["a. % trailing comment", true],
    ["a.\n% whole comment line", true],
    ["a", false],
    ["a :- b", false],
    ["", false],
    ["% only a comment.", false],
    ["p(1).q(2).", true],
    ["a. % c1\n% c2\n", true],
  ])("%j → %s", (text, want) => {
    expect(endsWithStatement(text)).toBe(want);
  });
});

describe("debounced auto-run", () => {
  beforeEach(() => vi.useFakeTimers());
  afterEach(() => vi.useRealTimers());

  function scheduler() {
    const fired: number[] = [];
    const s = new AutoRunScheduler(() => fired.push(Date.now()), realTimers());
    return { s, fired };
  }

  it("fires once, 300 ms after the last qualifying edit", () => {
    const { s, fired } = scheduler();
    s.noteEdit("a.");
    vi.advanceTimersByTime(AUTO_RUN_DEBOUNCE_MS - 1);
    expect(fired).toHaveLength(0);
    vi.advanceTimersByTime(1);
    expect(fired).toHaveLength(1);
  });

  it("rapid edits collapse into a single run", () => {
    const { s, fired } = scheduler();
    s.noteEdit("a.");
    vi.advanceTimersByTime(100);
    s.noteEdit("a. b.");
    vi.advanceTimersByTime(100);
    s.noteEdit("a. b. c.");
    vi.advanceTimersByTime(AUTO_RUN_DEBOUNCE_MS);
    expect(fired).toHaveLength(1);
  });

  it("an edit that breaks the trailing statement cancels the pending run", () => {
    const { s, fired } = scheduler();
    s.noteEdit("a.");
    vi.advanceTimersByTime(100);
    s.noteEdit("a. b"); // no longer ends with a statement
    vi.advanceTimersByTime(10_000);
    expect(fired).toHaveLength(0);
  });

  it("keeps at most one auto-run in flight, deferring the follow-up", () => {
    const { s, fired } = scheduler();
    s.noteEdit("a.");
    vi.advanceTimersByTime(AUTO_RUN_DEBOUNCE_MS);
    expect(fired).toHaveLength(1); // in flight now

    s.noteEdit("a. b.");
    vi.advanceTimersByTime(AUTO_RUN_DEBOUNCE_MS * 3);
    expect(fired).toHaveLength(1); // deferred while in flight

    s.noteRunSettled();
    expect(fired).toHaveLength(2); // deferred run dispatched on settle
    s.noteRunSettled();
    expect(fired).toHaveLength(2); // nothing left to defer
  });

  it("cancel clears both the timer and any deferred run", () => {
    const { s, fired } = scheduler();
    s.noteEdit("a.");
    s.cancel();
    vi.advanceTimersByTime(10_000);
    expect(fired).toHaveLength(0);
  });
});
