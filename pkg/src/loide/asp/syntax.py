"""Abstract syntax for the ASP subset handled by the built-in engine.

Terms are constants (lowercase-leading identifiers), integers, or
variables (uppercase-leading identifiers).  Atoms are a predicate name
applied to terms; the same name with different arities counts as
distinct predicates.  Rule bodies mix atom literals (optionally negated
as failure) with comparison literals, which are always positive.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

COMPARISON_OPS = ("=", "!=", "<", "<=", ">", ">=")


@dataclass(frozen=True)
class Constant:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Integer:
    value: int

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class Variable:
    name: str

    def __str__(self) -> str:
        return self.name


Term = Union[Constant, Integer, Variable]


def term_key(term: Term):
    """Total order over ground terms: integers numerically, then constants
    lexicographically.  Integers sort before constants."""
    if isinstance(term, Integer):
        return (0, term.value)
    if isinstance(term, Constant):
        return (1, term.name)
    raise ValueError(f"variable {term} has no ground order")


def is_ground_term(term: Term) -> bool:
    return not isinstance(term, Variable)


@dataclass(frozen=True)
class Atom:
    predicate: str
    args: tuple[Term, ...] = ()

    def __str__(self) -> str:
        if not self.args:
            return self.predicate
        return "%s(%s)" % (self.predicate, ",".join(str(t) for t in self.args))

    @property
    def is_ground(self) -> bool:
        return all(is_ground_term(t) for t in self.args)

    def sort_key(self):
        return (self.predicate, tuple(term_key(t) for t in self.args))

    def variables(self) -> set[str]:
        return {t.name for t in self.args if isinstance(t, Variable)}


@dataclass(frozen=True)
class AtomLiteral:
    """Body occurrence of an atom, positive or negated as failure."""

    atom: Atom
    negated: bool = False

    def __str__(self) -> str:
        return ("not " if self.negated else "") + str(self.atom)

    def variables(self) -> set[str]:
        return self.atom.variables()


@dataclass(frozen=True)
class Comparison:
    """Built-in comparison between two terms; always a positive body literal."""

    op: str
    left: Term
    right: Term

    def __str__(self) -> str:
        return f"{self.left} {self.op} {self.right}"

    def variables(self) -> set[str]:
        out = set()
        for t in (self.left, self.right):
            if isinstance(t, Variable):
                out.add(t.name)
        return out


Literal = Union[AtomLiteral, Comparison]


@dataclass(frozen=True)
class Rule:
    """head atoms (empty = constraint, several = disjunction) :- body literals."""

    head: tuple[Atom, ...] = ()
    body: tuple[Literal, ...] = ()

    def __str__(self) -> str:
        head = " | ".join(str(a) for a in self.head)
        body = ", ".join(str(l) for l in self.body)
        if not self.body:
            return f"{head}."
        if not self.head:
            return f":- {body}."
        return f"{head} :- {body}."

    @property
    def is_constraint(self) -> bool:
        return not self.head

    @property
    def is_fact(self) -> bool:
        return not self.body and len(self.head) == 1

    def variables(self) -> set[str]:
        out: set[str] = set()
        for a in self.head:
            out |= a.variables()
        for l in self.body:
            out |= l.variables()
        return out


@dataclass(frozen=True)
class AnswerSet:
    """A set of ground atoms forming a stable model."""

    atoms: frozenset[Atom]

    def sorted_atoms(self) -> list[Atom]:
        return sorted(self.atoms, key=Atom.sort_key)

    def sort_key(self):
        """Answer sets compare as their sorted atom lists."""
        return tuple(a.sort_key() for a in self.sorted_atoms())

    def __str__(self) -> str:
        return "{" + ", ".join(str(a) for a in self.sorted_atoms()) + "}"


def evaluate_comparison(op: str, left: Term, right: Term) -> bool:
    """Evaluate a ground comparison under the engine's total term order."""
    lk, rk = term_key(left), term_key(right)
    if op == "=":
        return lk == rk
    if op == "!=":
        return lk != rk
    if op == "<":
        return lk < rk
    if op == "<=":
        return lk <= rk
    if op == ">":
        return lk > rk
    if op == ">=":
        return lk >= rk
    raise ValueError(f"unknown comparison operator {op!r}")
