"""Stable-model computation for ground programs.

`reduct` and `is_stable` are the definitional operations (subset
enumeration, desk scale); `enumerate_answer_sets` is the production
path: it grounds, prunes atoms that no rule chain can ever derive, and
runs a branch-and-prune search whose leaves are verified with a
reduct-based minimality check.
"""

from __future__ import annotations

import itertools
import time
from typing import Iterable, Sequence

from .errors import AnswerSetLimitError, SolveTimeout
from .grounding import DEFAULT_INSTANCE_CAP, ground, safety_check
from .parser import parse
from .syntax import AnswerSet, Atom, AtomLiteral, Comparison, Rule, evaluate_comparison

DEFAULT_ANSWER_SET_LIMIT = 1000

_DEADLINE_STRIDE = 256


def _body_holds(body: Sequence, atoms: frozenset[Atom]) -> bool:
    for lit in body:
        if isinstance(lit, Comparison):
            if not evaluate_comparison(lit.op, lit.left, lit.right):
                return False
        elif lit.negated:
            if lit.atom in atoms:
                return False
        elif lit.atom not in atoms:
            return False
    return True


def is_model(ground_rules: Iterable[Rule], atoms: frozenset[Atom]) -> bool:
    """True when every rule with a satisfied body has a head atom in `atoms`."""
    for rule in ground_rules:
        if _body_holds(rule.body, atoms) and not any(h in atoms for h in rule.head):
            return False
    return True


def reduct(ground_rules: Iterable[Rule], candidate: frozenset[Atom]) -> list[Rule]:
    """Gelfond-Lifschitz reduct: drop rules with a negated atom inside the
    candidate, strip the remaining negated literals."""
    out: list[Rule] = []
    for rule in ground_rules:
        body: list[AtomLiteral] = []
        deleted = False
        for lit in rule.body:
            if isinstance(lit, Comparison):
                raise ValueError("reduct expects ground rules with comparisons evaluated away")
            if lit.negated:
                if lit.atom in candidate:
                    deleted = True
                    break
            else:
                body.append(lit)
        if not deleted:
            out.append(Rule(rule.head, tuple(body)))
    return out


def is_stable(ground_rules: Sequence[Rule], candidate: Iterable[Atom]) -> bool:
    """Definitional stability test: the candidate is a model of its reduct
    and no proper subset is.  Enumerates subsets; desk scale only."""
    cand = frozenset(candidate)
    red = reduct(ground_rules, cand)
    if not is_model(red, cand):
        return False
    atoms = sorted(cand, key=Atom.sort_key)
    for size in range(len(atoms)):
        for combo in itertools.combinations(atoms, size):
            if is_model(red, frozenset(combo)):
                return False
    return True


class _MaskedProgram:
    """Bitmask view of a ground program restricted to derivable atoms."""

    def __init__(self, ground_rules: Sequence[Rule]):
        seen: set[Atom] = set()
        for rule in ground_rules:
            seen.update(rule.head)
            for lit in rule.body:
                seen.add(lit.atom)
        self.atoms: list[Atom] = sorted(seen, key=Atom.sort_key)
        index = {a: i for i, a in enumerate(self.atoms)}

        rules: list[tuple[int, int, int]] = []
        for rule in ground_rules:
            head = pos = neg = 0
            for a in rule.head:
                head |= 1 << index[a]
            for lit in rule.body:
                if lit.negated:
                    neg |= 1 << index[lit.atom]
                else:
                    pos |= 1 << index[lit.atom]
            rules.append((head, pos, neg))

        # Upper bound on any stable model: iterate rules as if negation
        # always succeeded; atoms never reached can be fixed to false.
        derivable = 0
        changed = True
        while changed:
            changed = False
            for head, pos, _ in rules:
                if pos & ~derivable == 0 and head & ~derivable:
                    derivable |= head
                    changed = True
        self.derivable = derivable
        # Rules whose positive body mentions an underivable atom can never
        # fire within the search space; they constrain nothing.
        self.rules = [r for r in rules if r[1] & ~derivable == 0]

    def atoms_of(self, mask: int) -> frozenset[Atom]:
        return frozenset(a for i, a in enumerate(self.atoms) if mask >> i & 1)


def _is_stable_masked(rules: list[tuple[int, int, int]], s: int, ticker) -> bool:
    for head, pos, neg in rules:
        if pos & ~s == 0 and neg & s == 0 and head & s == 0:
            return False
    red = [(head, pos) for head, pos, neg in rules if neg & s == 0]
    disjunctive = any(head & (head - 1) for head, _ in red)

    if not disjunctive:
        least = 0
        changed = True
        while changed:
            changed = False
            for head, pos in red:
                if head and pos & ~least == 0 and head & ~least:
                    least |= head
                    changed = True
        return least == s

    # Atoms forced into every submodel: unit-propagate rules whose body is
    # already forced and whose head intersects the candidate in one atom.
    forced = 0
    changed = True
    while changed:
        changed = False
        for head, pos in red:
            hs = head & s
            if hs and pos & ~forced == 0 and hs & (hs - 1) == 0 and hs & ~forced:
                forced |= hs
                changed = True
    if forced == s:
        return True
    free = s & ~forced
    sub = (free - 1) & free
    while True:
        ticker()
        candidate = forced | sub
        for head, pos in red:
            if pos & ~candidate == 0 and head & candidate == 0:
                break
        else:
            return False  # found a proper submodel
        if sub == 0:
            return True
        sub = (sub - 1) & free


def enumerate_answer_sets(
    rules: Sequence[Rule],
    limit: int = DEFAULT_ANSWER_SET_LIMIT,
    *,
    max_instances: int = DEFAULT_INSTANCE_CAP,
    deadline: float | None = None,
) -> list[AnswerSet]:
    """All stable models of the grounded program, sorted by their sorted
    atom lists.

    Rules must be safe.  Raises AnswerSetLimitError when more than `limit`
    stable models exist and SolveTimeout past the deadline.
    """
    ground_rules = ground(rules, max_instances=max_instances, deadline=deadline)
    program = _MaskedProgram(ground_rules)
    active = program.rules
    candidates = [i for i in range(len(program.atoms)) if program.derivable >> i & 1]

    ticks = 0

    def ticker():
        nonlocal ticks
        ticks += 1
        if deadline is not None and ticks % _DEADLINE_STRIDE == 0:
            if time.monotonic() > deadline:
                raise SolveTimeout("deadline exceeded while enumerating answer sets")

    found: list[int] = []
    # Iterative depth-first search over truth assignments to candidate atoms.
    stack: list[tuple[int, int, int]] = [(0, 0, 0)]  # (depth, true_mask, false_mask)
    while stack:
        depth, true_mask, false_mask = stack.pop()
        ticker()
        undecided = program.derivable & ~(true_mask | false_mask)
        admissible = true_mask | undecided
        violated = False
        for head, pos, neg in active:
            if pos & ~true_mask == 0 and neg & admissible == 0 and head & admissible == 0:
                violated = True
                break
        if violated:
            continue
        if depth == len(candidates):
            if _is_stable_masked(active, true_mask, ticker):
                found.append(true_mask)
                if len(found) > limit:
                    raise AnswerSetLimitError(
                        f"program has more than {limit} answer sets"
                    )
            continue
        bit = 1 << candidates[depth]
        stack.append((depth + 1, true_mask, false_mask | bit))
        stack.append((depth + 1, true_mask | bit, false_mask))
    sets = [AnswerSet(program.atoms_of(mask)) for mask in found]
    sets.sort(key=AnswerSet.sort_key)
    return sets


def solve(
    text: str,
    limit: int = DEFAULT_ANSWER_SET_LIMIT,
    *,
    max_instances: int = DEFAULT_INSTANCE_CAP,
    deadline: float | None = None,
) -> list[AnswerSet]:
    """Parse, safety-check, ground, and enumerate in one step."""
    rules = parse(text)
    safety_check(rules)
    return enumerate_answer_sets(
        rules, limit, max_instances=max_instances, deadline=deadline
    )
