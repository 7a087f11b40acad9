"""Safety analysis and Herbrand-base grounding.

Grounding instantiates every rule over all constants and integers
occurring in the program, evaluates comparison literals, drops
instances whose comparisons fail, and strips satisfied comparisons
from the emitted rules.
"""

from __future__ import annotations

import itertools
import time
from typing import Iterable, Sequence

from .errors import GroundingLimitError, SafetyError, SolveTimeout
from .syntax import (
    Atom,
    AtomLiteral,
    Comparison,
    Rule,
    Term,
    Variable,
    evaluate_comparison,
    term_key,
)

DEFAULT_INSTANCE_CAP = 100_000

# A rule can legitimately drop many candidate instances to failed
# comparisons, but unbounded sweeps over a huge substitution space must
# still terminate; attempts are budgeted at a multiple of the cap.
_ATTEMPT_FACTOR = 10


def safety_check(rules: Sequence[Rule]) -> None:
    """Raise SafetyError for the first rule variable that does not occur
    in a positive non-comparison body atom."""
    for index, rule in enumerate(rules):
        bound: set[str] = set()
        for lit in rule.body:
            if isinstance(lit, AtomLiteral) and not lit.negated:
                bound |= lit.atom.variables()
        for var in sorted(rule.variables()):
            if var not in bound:
                raise SafetyError(index, var, str(rule))


def herbrand_universe(rules: Iterable[Rule]) -> list[Term]:
    """All ground terms (constants and integers) mentioned by the program,
    in the engine's term order."""
    seen: set[Term] = set()
    for rule in rules:
        for atom in rule.head:
            seen.update(t for t in atom.args if not isinstance(t, Variable))
        for lit in rule.body:
            if isinstance(lit, AtomLiteral):
                seen.update(t for t in lit.atom.args if not isinstance(t, Variable))
            else:
                seen.update(t for t in (lit.left, lit.right) if not isinstance(t, Variable))
    return sorted(seen, key=term_key)


def _substitute_atom(atom: Atom, binding: dict[str, Term]) -> Atom:
    if atom.is_ground:
        return atom
    return Atom(
        atom.predicate,
        tuple(binding[t.name] if isinstance(t, Variable) else t for t in atom.args),
    )


def _instantiate(rule: Rule, binding: dict[str, Term]) -> Rule | None:
    """Ground one rule instance; None when a comparison fails."""
    body: list[AtomLiteral] = []
    for lit in rule.body:
        if isinstance(lit, Comparison):
            left = binding[lit.left.name] if isinstance(lit.left, Variable) else lit.left
            right = binding[lit.right.name] if isinstance(lit.right, Variable) else lit.right
            if not evaluate_comparison(lit.op, left, right):
                return None
        else:
            body.append(AtomLiteral(_substitute_atom(lit.atom, binding), lit.negated))
    head = tuple(_substitute_atom(a, binding) for a in rule.head)
    return Rule(head, tuple(body))


def ground(
    rules: Sequence[Rule],
    *,
    max_instances: int = DEFAULT_INSTANCE_CAP,
    deadline: float | None = None,
) -> list[Rule]:
    """Emit every ground instance of every rule over the program's constants.

    Comparison literals are evaluated and removed; instances with a false
    comparison are dropped.  Raises GroundingLimitError past the instance
    cap and SolveTimeout past the deadline (time.monotonic timestamp).
    """
    universe = herbrand_universe(rules)
    out: list[Rule] = []
    attempts = 0
    attempt_budget = max_instances * _ATTEMPT_FACTOR
    for rule in rules:
        variables = sorted(rule.variables())
        if not variables:
            instance = _instantiate(rule, {})
            if instance is not None:
                out.append(instance)
                if len(out) > max_instances:
                    raise GroundingLimitError(
                        f"ground program exceeds {max_instances} rule instances"
                    )
            continue
        for combo in itertools.product(universe, repeat=len(variables)):
            attempts += 1
            if attempts > attempt_budget:
                raise GroundingLimitError(
                    f"grounding abandoned after {attempt_budget} candidate instances"
                )
            if deadline is not None and attempts % 1024 == 0 and time.monotonic() > deadline:
                raise SolveTimeout("deadline exceeded while grounding")
            instance = _instantiate(rule, dict(zip(variables, combo)))
            if instance is not None:
                out.append(instance)
                if len(out) > max_instances:
                    raise GroundingLimitError(
                        f"ground program exceeds {max_instances} rule instances"
                    )
    return out
