"""Typed failures raised by the built-in engine.

The executor translates these into wire-level problem reports; library
callers can catch them directly.
"""

from __future__ import annotations


class EngineError(Exception):
    """Base class for all built-in engine failures."""


class ParseError(EngineError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line} col {column}: {message}")
        self.line = line
        self.column = column
        self.reason = message


class SafetyError(EngineError):
    """A rule variable does not occur in any positive non-comparison body atom."""

    def __init__(self, rule_index: int, variable: str, rule_text: str):
        super().__init__(
            f"rule {rule_index + 1}: variable {variable} is unsafe in `{rule_text}`"
        )
        self.rule_index = rule_index
        self.variable = variable


class GroundingLimitError(EngineError):
    """Grounding exceeded the configured instance cap."""


class AnswerSetLimitError(EngineError):
    """More stable models exist than the configured enumeration limit."""


class SolveTimeout(EngineError):
    """Cooperative deadline hit while grounding or enumerating."""
