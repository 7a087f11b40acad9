import { App } from "./app";
import { codeMirrorEditor } from "./cmeditor";

const scheme = location.protocol === "https:" ? "wss" : "ws";

new App(document.getElementById("app")!, {
  storage: localStorage,
  socketFactory: (url) => new WebSocket(url),
  editorFactory: codeMirrorEditor,
  timers: {
    setTimeout: (fn, ms) => window.setTimeout(fn, ms),
    clearTimeout: (handle) => window.clearTimeout(handle),
  },
  socketUrl: `${scheme}://${location.host}/ws`,
});
