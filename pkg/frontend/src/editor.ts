/**
 * Editor host abstraction: the application talks to this small surface;
 * the production build plugs in a CodeMirror-backed implementation, tests
 * use the plain textarea one.
 */

export interface EditorHost {
  getText(): string;
  setText(text: string): void;
  onChange(callback: () => void): void;
  focus(): void;
  destroy(): void;
}

export type EditorFactory = (parent: HTMLElement, initial: string) => EditorHost;

/** Minimal textarea-backed editor; also the no-dependency fallback. */
export function textareaEditor(parent: HTMLElement, initial: string): EditorHost {
  const doc = parent.ownerDocument;
  const area = doc.createElement("textarea");
  area.className = "plain-editor";
  area.spellcheck = false;
  area.value = initial;
  parent.appendChild(area);
  let changed: (() => void) | null = null;
  area.addEventListener("input", () => changed?.());
  return {
    getText: () => area.value,
    setText(text) {
      area.value = text;
    },
    onChange(callback) {
      changed = callback;
    },
    focus: () => area.focus(),
    destroy: () => area.remove(),
  };
}
