/**
 * Auto-run on statement end: when enabled, an edit that leaves the active
 * tab ending in a statement terminator schedules a run, debounced, with at
 * most one auto-run in flight at a time.
 */

import { Timers } from "./socket";

export const AUTO_RUN_DEBOUNCE_MS = 300;

/** True when the trailing non-comment, non-whitespace character is `.`.
 * Comments run from `%` to end of line. */
export function endsWithStatement(text: string): boolean {
  const stripped = text.replace(/%[^\n]*/g, "").trimEnd();
  return stripped.endsWith(".");
}

export class AutoRunScheduler {
  private handle: number | null = null;
  private inFlight = false;
  private deferred = false;

  constructor(
    private readonly dispatch: () => void,
    private readonly timers: Timers,
    private readonly delayMs: number = AUTO_RUN_DEBOUNCE_MS,
  ) {}

  /** Call on every edit of the active tab. */
  noteEdit(text: string): void {
    if (this.handle !== null) {
      this.timers.clearTimeout(this.handle);
      this.handle = null;
    }
    if (!endsWithStatement(text)) return;
    this.handle = this.timers.setTimeout(() => {
      this.handle = null;
      this.fire();
    }, this.delayMs);
  }

  /** Call when the auto-dispatched run settles. */
  noteRunSettled(): void {
    this.inFlight = false;
    if (this.deferred) {
      this.deferred = false;
      this.fire();
    }
  }

  cancel(): void {
    if (this.handle !== null) {
      this.timers.clearTimeout(this.handle);
      this.handle = null;
    }
    this.deferred = false;
  }

  private fire(): void {
    if (this.inFlight) {
      this.deferred = true;
      return;
    }
    this.inFlight = true;
    this.dispatch();
  }
}
