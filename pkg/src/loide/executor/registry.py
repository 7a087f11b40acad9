"""Engine registry: which (language, engine) pairs the executor can run.

External engines are described by a command template whose `{file}`
placeholder receives the path of the temp file holding the composed
program.  Option names are validated against fnmatch-style patterns in
`allowed_options`; the reserved option name `timeout` is handled by the
executor itself and never reaches a solver.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from fnmatch import fnmatchcase
from pathlib import Path
from typing import Optional, Union

from ..protocol import IDENTIFIER_RE, EngineInfo

FILE_PLACEHOLDER = "{file}"

DEFAULT_TIMEOUT = 20.0
MAX_TIMEOUT = 300.0


@dataclass(frozen=True)
class EngineDescriptor:
    language: str
    engine: str
    kind: str  # builtin | external
    command_template: tuple[str, ...] = ()
    allowed_options: tuple[str, ...] = ()
    default_timeout: float = DEFAULT_TIMEOUT
    max_timeout: float = MAX_TIMEOUT

    def allows_option(self, name: str) -> bool:
        return any(fnmatchcase(name, pattern) for pattern in self.allowed_options)

    def info(self) -> EngineInfo:
        """Snapshot entry without the command template."""
        return EngineInfo(
            language=self.language,
            engine=self.engine,
            kind=self.kind,
            allowed_options=self.allowed_options,
            default_timeout=self.default_timeout,
        )


BUILTIN_ASP = EngineDescriptor(
    language="asp",
    engine="builtin",
    kind="builtin",
    allowed_options=("filter", "timeout"),
)


def _validate(desc: EngineDescriptor) -> None:
    if not IDENTIFIER_RE.match(desc.language):
        raise ValueError(f"invalid language identifier {desc.language!r}")
    if not IDENTIFIER_RE.match(desc.engine):
        raise ValueError(f"invalid engine identifier {desc.engine!r}")
    if desc.kind not in ("builtin", "external"):
        raise ValueError(f"unknown engine kind {desc.kind!r}")
    if desc.kind == "external":
        if not desc.command_template:
            raise ValueError(f"{desc.language}/{desc.engine}: empty command template")
        if not any(FILE_PLACEHOLDER in arg for arg in desc.command_template):
            raise ValueError(
                f"{desc.language}/{desc.engine}: command template has no "
                f"{FILE_PLACEHOLDER} placeholder"
            )
    if desc.default_timeout <= 0 or desc.max_timeout < desc.default_timeout:
        raise ValueError(f"{desc.language}/{desc.engine}: bad timeout bounds")


class Registry:
    """Concurrent-read, exclusive-write engine table."""

    def __init__(self):
        self._lock = threading.Lock()
        self._engines: dict[tuple[str, str], EngineDescriptor] = {}

    def register(self, desc: EngineDescriptor) -> None:
        """Add or atomically replace a descriptor.  Raises ValueError on an
        invalid descriptor (bad identifiers, missing placeholder, ...)."""
        _validate(desc)
        with self._lock:
            self._engines[(desc.language, desc.engine)] = desc

    def lookup(self, language: str, engine: str) -> Optional[EngineDescriptor]:
        with self._lock:
            return self._engines.get((language, engine))

    def has_language(self, language: str) -> bool:
        with self._lock:
            return any(lang == language for lang, _ in self._engines)

    def snapshot(self) -> list[EngineInfo]:
        """Registry entries sans command templates, ordered by language then
        engine."""
        with self._lock:
            descriptors = list(self._engines.values())
        descriptors.sort(key=lambda d: (d.language, d.engine))
        return [d.info() for d in descriptors]


def parse_descriptor(doc: dict) -> EngineDescriptor:
    if not isinstance(doc, dict):
        raise ValueError("engine entry must be a JSON object")
    try:
        language = doc["language"]
        engine = doc["engine"]
    except KeyError as exc:
        raise ValueError(f"engine entry is missing {exc.args[0]!r}") from None
    template = doc.get("command_template", [])
    if not isinstance(template, list) or any(not isinstance(a, str) for a in template):
        raise ValueError(f"{language}/{engine}: command_template must be a list of strings")
    allowed = doc.get("allowed_options", [])
    if not isinstance(allowed, list) or any(not isinstance(a, str) for a in allowed):
        raise ValueError(f"{language}/{engine}: allowed_options must be a list of strings")
    default_timeout = float(doc.get("default_timeout", DEFAULT_TIMEOUT))
    max_timeout = float(doc.get("max_timeout", max(MAX_TIMEOUT, default_timeout)))
    return EngineDescriptor(
        language=language,
        engine=engine,
        kind=doc.get("kind", "external"),
        command_template=tuple(template),
        allowed_options=tuple(allowed),
        default_timeout=default_timeout,
        max_timeout=max_timeout,
    )


def load_engines_file(path: Union[str, Path]) -> list[EngineDescriptor]:
    """Parse a registry config file: a JSON list of engine descriptors."""
    doc = json.loads(Path(path).read_text("utf-8"))
    if not isinstance(doc, list):
        raise ValueError("engines file must contain a JSON list")
    return [parse_descriptor(entry) for entry in doc]


def build_registry(engines_file: Union[str, Path, None] = None) -> Registry:
    """Start-up registry: the builtin ASP engine is always present; entries
    from the config file are added on top."""
    registry = Registry()
    registry.register(BUILTIN_ASP)
    if engines_file:
        for desc in load_engines_file(engines_file):
            registry.register(desc)
    return registry
