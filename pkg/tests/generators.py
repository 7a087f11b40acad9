"""Seeded random inputs for the property suites: programs, workspaces,
wire messages, and byte-level mutations."""

from __future__ import annotations

import random
from typing import Optional

from loide.protocol import (
    Envelope,
    EngineInfo,
    EngineListing,
    OptionEntry,
    ProblemCode,
    ProblemReport,
    RunRequest,
    RunResult,
    Settings,
    Tab,
    Workspace,
)

# Pool of distinct ground atoms; a program draws at most ten of these, so
# the brute-force oracle stays within 2^10 candidates.
GROUND_ATOMS = (
    "a", "b", "c", "d", "s",
    "p(1)", "p(2)", "q(x)", "q(y)", "r(1,x)",
)

_TEXT_POOL = "abc XYZ 012 _:-.,|% äöü λ∆ 猫 🚀 \"quoted\" \\slash\nnewline\ttab"


def random_ground_program(
    rng: random.Random, max_atoms: int = 10, max_rules: int = 15
) -> str:
    """Propositional program mixing facts, naf, disjunction, constraints."""
    atoms = rng.sample(GROUND_ATOMS, rng.randint(2, max_atoms))
    rules = []
    for _ in range(rng.randint(1, max_rules)):
        head = rng.sample(atoms, min(rng.choice((0, 1, 1, 1, 1, 2, 2, 3)), len(atoms)))
        body = [
            ("not " if rng.random() < 0.35 else "") + rng.choice(atoms)
            for _ in range(rng.randint(0, 3))
        ]
        if not head and not body:
            continue
        if not head:
            rules.append(":- " + ", ".join(body) + ".")
        elif not body:
            rules.append(" | ".join(head) + ".")
        else:
            rules.append(" | ".join(head) + " :- " + ", ".join(body) + ".")
    if not rules:
        rules = [atoms[0] + "."]
    return "\n".join(rules)


def random_variable_program(rng: random.Random) -> str:
    """Tiny graph program with variables and comparisons; universe kept to
    two constants so the oracle's ground atom count stays near a dozen."""
    lines = ["node(1). node(2)."]
    for a in (1, 2):
        for b in (1, 2):
            if rng.random() < 0.55:
                lines.append(f"edge({a},{b}).")
    lines.append("reach(X,Y) :- edge(X,Y).")
    lines.append("reach(X,Z) :- reach(X,Y), edge(Y,Z).")
    if rng.random() < 0.5:
        lines.append("loop(X) :- reach(X,X).")
    if rng.random() < 0.5:
        op = rng.choice(("<", "<=", ">", ">=", "=", "!="))
        lines.append(f"low(X) :- node(X), X {op} 2.")
    if rng.random() < 0.4:
        lines.append("in(X) | out(X) :- node(X).")
        if rng.random() < 0.5:
            lines.append(":- in(X), loop(X).")
    return "\n".join(lines)


def _text(rng: random.Random, max_len: int = 30) -> str:
    return "".join(
        rng.choice(_TEXT_POOL) for _ in range(rng.randint(0, max_len))
    )


def _identifier(rng: random.Random) -> str:
    first = rng.choice("abcdefghijklmnopqrstuvwxyz")
    rest = "".join(
        rng.choice("abcdefghijklmnopqrstuvwxyz0123456789_-")
        for _ in range(rng.randint(0, 8))
    )
    return first + rest


def _option(rng: random.Random) -> OptionEntry:
    name = "".join(
        rng.choice("AZaz09_=/.:+-") for _ in range(rng.randint(1, 10))
    )
    values = tuple(_text(rng, 12) for _ in range(rng.randint(0, 3)))
    return OptionEntry(name, values)


def random_run_request(rng: random.Random) -> RunRequest:
    return RunRequest(
        language=_identifier(rng),
        engine=_identifier(rng),
        options=tuple(_option(rng) for _ in range(rng.randint(0, 4))),
        sources=tuple(_text(rng, 60) for _ in range(rng.randint(0, 4))),
    )


def random_envelope(rng: random.Random) -> Envelope:
    kind = rng.choice(("run", "result", "problem", "list_engines", "engines", "ping", "pong"))
    ident = _text(rng, 16)
    if kind == "run":
        return Envelope(kind, ident, random_run_request(rng))
    if kind == "result":
        return Envelope(kind, ident, RunResult(_text(rng, 80), _text(rng, 40)))
    if kind == "problem":
        return Envelope(
            kind,
            ident,
            ProblemReport(rng.choice(list(ProblemCode)), _text(rng, 40) or "x"),
        )
    if kind == "engines":
        infos = tuple(
            EngineInfo(
                language=_identifier(rng),
                engine=_identifier(rng),
                kind=rng.choice(("builtin", "external")),
                allowed_options=tuple(
                    _option(rng).name for _ in range(rng.randint(0, 3))
                ),
                default_timeout=rng.choice((1.0, 5, 20.0, 0.25)),
            )
            for _ in range(rng.randint(0, 3))
        )
        return Envelope(kind, ident, EngineListing(infos))
    return Envelope(kind, ident)


def random_workspace(rng: random.Random, program: Optional[str] = None) -> Workspace:
    tabs = []
    for i in range(rng.randint(1, 4)):
        tabs.append(
            Tab(
                name=f"tab-{i + 1}",
                text=program if program is not None else random_ground_program(rng),
                run_selected=rng.random() < 0.75,
            )
        )
    settings = Settings(
        language="asp",
        engine="builtin",
        options=[_option(rng)] if rng.random() < 0.3 else [],
        auto_run=rng.random() < 0.5,
        layout={"theme": rng.choice(("dark", "light"))} if rng.random() < 0.6 else {},
    )
    last = RunResult(_text(rng, 30), _text(rng, 10)) if rng.random() < 0.3 else None
    return Workspace(tabs=tabs, settings=settings, last_output=last)


def mutate(rng: random.Random, data: bytes) -> bytes:
    """One random byte-level corruption of an encoded frame."""
    choice = rng.randrange(8)
    if choice == 0 and data:
        return data[: rng.randrange(len(data))]  # truncate
    if choice == 1 and data:
        i = rng.randrange(len(data))
        return data[:i] + bytes([rng.randrange(256)]) + data[i + 1 :]
    if choice == 2:
        i = rng.randrange(len(data) + 1)
        junk = bytes(rng.randrange(256) for _ in range(rng.randint(1, 6)))
        return data[:i] + junk + data[i:]
    if choice == 3 and len(data) > 2:
        i = rng.randrange(len(data) - 1)
        j = rng.randint(i + 1, len(data))
        return data[:i] + data[j:]  # delete a slice
    if choice == 4:
        return data + data  # two frames glued together
    if choice == 5:
        return data.replace(b'"type"', b'"typo"', 1)
    if choice == 6:
        return data.replace(b":", b",", 1)
    return bytes(rng.randrange(256) for _ in range(rng.randint(0, 40)))
