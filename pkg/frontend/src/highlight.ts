/**
 * Output panel rendering and predicate-name highlighting.
 *
 * Answer sets arrive as plain text ("Answer set N" headings and
 * "{atom, atom, ...}" lines, or "INCOHERENT").  Every atom's leading
 * predicate name becomes a clickable token; selecting a name highlights
 * all occurrences of that exact name across every displayed answer set —
 * name match only, arity and arguments play no part.  Selecting the same
 * name again clears the highlight.
 */

const ATOM_NAME = /^[a-z][a-z0-9_]*/;

export const NAME_TOKEN_CLASS = "pname";
export const HIGHLIGHT_CLASS = "hl";

/** All predicate names occurring in an output text, in first-seen order. */
export function scanNames(model: string): string[] {
  const seen: string[] = [];
  for (const atom of atomsOf(model)) {
    const name = atomName(atom);
    if (name && !seen.includes(name)) seen.push(name);
  }
  return seen;
}

/** Number of atoms named `name` across all displayed answer sets. */
export function countOccurrences(model: string, name: string): number {
  let count = 0;
  for (const atom of atomsOf(model)) {
    if (atomName(atom) === name) count += 1;
  }
  return count;
}

function* atomsOf(model: string): Generator<string> {
  for (const line of model.split("\n")) {
    if (!line.startsWith("{") || !line.endsWith("}")) continue;
    const inner = line.slice(1, -1);
    if (!inner) continue;
    // Atom arguments never contain ", " (no space after commas inside
    // terms), so this split is exact.
    for (const atom of inner.split(", ")) yield atom;
  }
}

function atomName(atom: string): string | null {
  const match = ATOM_NAME.exec(atom);
  return match ? match[0] : null;
}

/** Render an output text into `container`: set lines become sequences of
 * name tokens and plain text, other lines stay text. */
export function renderOutput(container: HTMLElement, model: string): void {
  container.textContent = "";
  const doc = container.ownerDocument;
  const lines = model.split("\n");
  lines.forEach((line, index) => {
    const lineEl = doc.createElement("div");
    lineEl.className = "output-line";
    if (line.startsWith("{") && line.endsWith("}")) {
      lineEl.appendChild(doc.createTextNode("{"));
      const inner = line.slice(1, -1);
      const atoms = inner ? inner.split(", ") : [];
      atoms.forEach((atom, i) => {
        if (i > 0) lineEl.appendChild(doc.createTextNode(", "));
        const name = atomName(atom);
        if (name) {
          const token = doc.createElement("span");
          token.className = NAME_TOKEN_CLASS;
          token.dataset.name = name;
          token.textContent = name;
          lineEl.appendChild(token);
          lineEl.appendChild(doc.createTextNode(atom.slice(name.length)));
        } else {
          lineEl.appendChild(doc.createTextNode(atom));
        }
      });
      lineEl.appendChild(doc.createTextNode("}"));
    } else {
      lineEl.textContent = line;
      if (index === 0 && line.startsWith("Answer set")) {
        lineEl.classList.add("answer-heading");
      }
    }
    container.appendChild(lineEl);
  });
}

/** Apply (or clear, with null) the highlight for a predicate name; returns
 * the number of highlighted tokens. */
export function applyHighlight(container: HTMLElement, name: string | null): number {
  let count = 0;
  for (const token of container.querySelectorAll<HTMLElement>(`.${NAME_TOKEN_CLASS}`)) {
    const hit = name !== null && token.dataset.name === name;
    token.classList.toggle(HIGHLIGHT_CLASS, hit);
    if (hit) count += 1;
  }
  return count;
}
