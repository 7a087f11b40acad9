/**
 * Gateway session socket: reconnects with capped exponential backoff and
 * correlates one terminal reply per dispatched run id.
 *
 * A disconnect mid-run settles the affected runs locally with an
 * `executor_unavailable` problem — nothing is ever re-sent automatically —
 * so every dispatched id gets exactly one terminal update.
 */

import {
  decode,
  encode,
  Envelope,
  isFault,
  ProblemReport,
  RunRequest,
  RunResult,
} from "./protocol";
import { Connection } from "./state";

export const BACKOFF_START_MS = 250;
export const BACKOFF_CAP_MS = 5000;

/** Terminal outcome delivered exactly once per dispatched run. */
export type RunOutcome =
  | { kind: "result"; result: RunResult }
  | { kind: "problem"; problem: ProblemReport };

export interface SocketEvents {
  onConnection(state: Connection): void;
  onRunSettled(id: string, outcome: RunOutcome): void;
  onEngines(listing: Envelope): void;
}

/** The subset of the WebSocket interface the client uses; tests provide a
 * scripted double.  Handler params are `any` so the DOM WebSocket type
 * fits structurally under strict function variance. */
export interface SocketLike {
  send(data: string): void;
  close(): void;
  onopen: ((event: any) => void) | null;
  onclose: ((event: any) => void) | null;
  onmessage: ((event: any) => void) | null;
}

export type SocketFactory = (url: string) => SocketLike;

export interface Timers {
  setTimeout(fn: () => void, ms: number): number;
  clearTimeout(handle: number): void;
}

function localProblem(detail: string): RunOutcome {
  return { kind: "problem", problem: { code: "executor_unavailable", detail } };
}

export class GatewaySocket {
  private socket: SocketLike | null = null;
  private open = false;
  private stopped = true;
  private delay = BACKOFF_START_MS;
  private retryHandle: number | null = null;
  private counter = 0;
  private pendingRuns = new Set<string>();

  constructor(
    private readonly url: string,
    private readonly events: SocketEvents,
    private readonly factory: SocketFactory,
    private readonly timers: Timers,
  ) {}

  start(): void {
    this.stopped = false;
    this.connect();
  }

  stop(): void {
    this.stopped = true;
    if (this.retryHandle !== null) {
      this.timers.clearTimeout(this.retryHandle);
      this.retryHandle = null;
    }
    const socket = this.socket;
    this.socket = null;
    if (socket) {
      socket.onopen = socket.onclose = socket.onmessage = null;
      socket.close();
    }
    this.open = false;
    this.settleAllPending("session closed");
    this.events.onConnection("offline");
  }

  get isConnected(): boolean {
    return this.open;
  }

  /** Send a run; returns its correlation id.  The terminal update arrives
   * via onRunSettled — immediately, when there is no connection. */
  dispatchRun(request: RunRequest): string {
    const id = `run-${++this.counter}`;
    if (!this.open || !this.socket) {
      // Settle asynchronously so callers can record the id first.
      this.timers.setTimeout(
        () => this.events.onRunSettled(id, localProblem("not connected to the server")),
        0,
      );
      return id;
    }
    this.pendingRuns.add(id);
    this.socket.send(encode({ type: "run", id, payload: request }));
    return id;
  }

  requestEngineListing(): void {
    if (this.open && this.socket) {
      this.socket.send(encode({ type: "list_engines", id: `eng-${++this.counter}`, payload: null }));
    }
  }

  private connect(): void {
    let socket: SocketLike;
    try {
      socket = this.factory(this.url);
    } catch {
      this.scheduleRetry();
      return;
    }
    this.socket = socket;
    socket.onopen = () => {
      this.open = true;
      this.delay = BACKOFF_START_MS;
      this.events.onConnection("connected");
      this.requestEngineListing();
    };
    socket.onclose = () => {
      this.open = false;
      this.socket = null;
      if (this.stopped) return;
      this.settleAllPending("connection to the server was lost");
      this.events.onConnection("reconnecting");
      this.scheduleRetry();
    };
    socket.onmessage = (event) => {
      if (typeof event.data === "string") this.receive(event.data);
    };
  }

  private scheduleRetry(): void {
    if (this.stopped || this.retryHandle !== null) return;
    this.retryHandle = this.timers.setTimeout(() => {
      this.retryHandle = null;
      if (!this.stopped) this.connect();
    }, this.delay);
    this.delay = Math.min(this.delay * 2, BACKOFF_CAP_MS);
  }

  private receive(data: string): void {
    const message = decode(data);
    if (isFault(message)) return; // nothing correlatable; ignore
    if (message.type === "engines") {
      this.events.onEngines(message);
      return;
    }
    if (!this.pendingRuns.has(message.id)) return; // pong or stray reply
    if (message.type === "result") {
      this.pendingRuns.delete(message.id);
      this.events.onRunSettled(message.id, {
        kind: "result",
        result: message.payload as RunResult,
      });
    } else if (message.type === "problem") {
      this.pendingRuns.delete(message.id);
      this.events.onRunSettled(message.id, {
        kind: "problem",
        problem: message.payload as ProblemReport,
      });
    }
  }

  private settleAllPending(reason: string): void {
    const pending = [...this.pendingRuns];
    this.pendingRuns.clear();
    for (const id of pending) {
      this.events.onRunSettled(id, localProblem(reason));
    }
  }
}
