/** Shared test doubles: in-memory storage, a scripted WebSocket, and an
 * App factory wired to both. */

import { App, AppDeps } from "../src/app";
import { textareaEditor } from "../src/editor";
import { Envelope, encode } from "../src/protocol";
import { KeyValueStore } from "../src/state";
import { SocketLike } from "../src/socket";

export class MemoryStorage implements KeyValueStore {
  private map = new Map<string, string>();

  getItem(key: string): string | null {
    return this.map.has(key) ? this.map.get(key)! : null;
  }

  setItem(key: string, value: string): void {
    this.map.set(key, value);
  }

  removeItem(key: string): void {
    this.map.delete(key);
  }
}

export class FakeSocket implements SocketLike {
  sent: string[] = [];
  closed = false;
  onopen: ((event: any) => void) | null = null;
  onclose: ((event: any) => void) | null = null;
  onmessage: ((event: any) => void) | null = null;

  send(data: string): void {
    this.sent.push(data);
  }

  close(): void {
    this.closed = true;
  }

  /** Server side of the script. */
  open(): void {
    this.onopen?.({});
  }

  dropFromServer(): void {
    this.onclose?.({});
  }

  reply(message: Envelope): void {
    this.onmessage?.({ data: encode(message) });
  }

  replyRaw(data: string): void {
    this.onmessage?.({ data });
  }

  /** Frames decoded back to objects, for assertions. */
  sentDocs(): any[] {
    return this.sent.map((frame) => JSON.parse(frame));
  }
}

export interface Harness {
  app: App;
  storage: MemoryStorage;
  sockets: FakeSocket[];
  root: HTMLElement;
  /** The most recently created socket. */
  socket(): FakeSocket;
}

export function realTimers() {
  return {
    setTimeout: (fn: () => void, ms: number) =>
      setTimeout(fn, ms) as unknown as number,
    clearTimeout: (handle: number) => clearTimeout(handle),
  };
}

export function makeApp(overrides: Partial<AppDeps> = {}): Harness {
  const storage = (overrides.storage as MemoryStorage) ?? new MemoryStorage();
  const sockets: FakeSocket[] = [];
  const deps: AppDeps = {
    storage,
    socketFactory: () => {
      const socket = new FakeSocket();
      sockets.push(socket);
      return socket;
    },
    editorFactory: textareaEditor,
    timers: realTimers(),
    socketUrl: "ws://test/ws",
    ...overrides,
  };
  const root = document.createElement("div");
  document.body.appendChild(root);
  const app = new App(root, deps);
  return { app, storage, sockets, root, socket: () => sockets[sockets.length - 1]! };
}

export function click(el: Element | null): void {
  if (!el) throw new Error("click target missing");
  (el as HTMLElement).dispatchEvent(
    new MouseEvent("click", { bubbles: true, cancelable: true }),
  );
}

export function setInput(el: Element | null, value: string): void {
  if (!el) throw new Error("input missing");
  const input = el as HTMLInputElement;
  input.value = value;
  input.dispatchEvent(new Event("change", { bubbles: true }));
}
