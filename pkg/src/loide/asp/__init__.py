"""Built-in reference solver for a ground-and-solve ASP subset.

Supports normal and disjunctive rules, negation as failure, constraints,
and comparison built-ins over integers and constants.  Deterministic:
identical program text always yields identical output.
"""

from .errors import (
    AnswerSetLimitError,
    EngineError,
    GroundingLimitError,
    ParseError,
    SafetyError,
    SolveTimeout,
)
from .formatting import INCOHERENT, format_output
from .grounding import ground, herbrand_universe, safety_check
from .parser import parse
from .solving import enumerate_answer_sets, is_model, is_stable, reduct, solve
from .syntax import (
    AnswerSet,
    Atom,
    AtomLiteral,
    Comparison,
    Constant,
    Integer,
    Literal,
    Rule,
    Term,
    Variable,
)

__all__ = [
    "AnswerSet",
    "AnswerSetLimitError",
    "Atom",
    "AtomLiteral",
    "Comparison",
    "Constant",
    "EngineError",
    "GroundingLimitError",
    "INCOHERENT",
    "Integer",
    "Literal",
    "ParseError",
    "Rule",
    "SafetyError",
    "SolveTimeout",
    "Term",
    "Variable",
    "enumerate_answer_sets",
    "format_output",
    "ground",
    "herbrand_universe",
    "is_model",
    "is_stable",
    "parse",
    "reduct",
    "safety_check",
    "solve",
]
