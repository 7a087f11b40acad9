/**
 * CodeMirror-backed editor host with a small stream-mode tokenizer for
 * answer-set programs.  Token classes: comment, variable, constant,
 * naf keyword, punctuation (plus numbers and the rule operator).
 */

import { basicSetup, EditorView } from "codemirror";
import { StreamLanguage, StreamParser } from "@codemirror/language";
import { oneDark } from "@codemirror/theme-one-dark";
import { EditorHost } from "./editor";

/** Stream tokenizer; exported for direct testing. */
export const aspParser: StreamParser<unknown> = {
  name: "asp",
  token(stream): string | null {
    if (stream.match(/^%.*/)) return "comment";
    if (stream.match(/^:-/)) return "operator";
    if (stream.match(/^-?\d+/)) return "number";
    if (stream.match(/^not\b/)) return "keyword"; // negation as failure
    if (stream.match(/^[A-Z_][A-Za-z0-9_]*/)) return "variableName";
    if (stream.match(/^[a-z][A-Za-z0-9_]*/)) return "atom"; // constants, predicates
    if (stream.match(/^[(),.|]/)) return "punctuation";
    if (stream.match(/^(!=|<=|>=|=|<|>)/)) return "operator";
    stream.next();
    return null;
  },
};

export const aspLanguage = StreamLanguage.define(aspParser);

export function codeMirrorEditor(parent: HTMLElement, initial: string): EditorHost {
  let changed: (() => void) | null = null;
  const view = new EditorView({
    parent,
    doc: initial,
    extensions: [
      basicSetup,
      aspLanguage,
      oneDark,
      EditorView.updateListener.of((update) => {
        if (update.docChanged) changed?.();
      }),
    ],
  });
  return {
    getText: () => view.state.doc.toString(),
    setText(text) {
      view.dispatch({
        changes: { from: 0, to: view.state.doc.length, insert: text },
      });
    },
    onChange(callback) {
      changed = callback;
    },
    focus: () => view.focus(),
    destroy: () => view.destroy(),
  };
}
