"""Render answer sets as the engine's canonical model text."""

from __future__ import annotations

from typing import Collection, Sequence

from .syntax import AnswerSet

INCOHERENT = "INCOHERENT"


def format_output(
    sets: Sequence[AnswerSet], predicates: Collection[str] | None = None
) -> str:
    """One `Answer set N` header plus one `{a, b(1)}` line per answer set,
    atoms sorted by predicate then arguments.  `predicates` filters atoms
    by predicate name; no sets at all renders as INCOHERENT."""
    if not sets:
        return INCOHERENT
    keep = None if predicates is None else set(predicates)
    lines: list[str] = []
    for number, answer_set in enumerate(sets, 1):
        atoms = answer_set.sorted_atoms()
        if keep is not None:
            atoms = [a for a in atoms if a.predicate in keep]
        lines.append(f"Answer set {number}")
        lines.append("{" + ", ".join(str(a) for a in atoms) + "}")
    return "\n".join(lines)
