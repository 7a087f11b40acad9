"""Wire protocol and workspace file format.

Every message between client, gateway, and executor is an Envelope
carried as one JSON text frame per WebSocket message.  Encoding is
canonical: UTF-8, no added whitespace, no trailing newline, field order
`type, id, payload` (payload fields in the order given by the dataclass
definitions below), so identical messages always serialize to identical
bytes.

`decode` never raises: anything that is not a valid envelope comes back
as a ProblemReport with code `malformed_message`.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Optional, Union

IDENTIFIER_RE = re.compile(r"[a-z][a-z0-9_-]*\Z")
OPTION_NAME_RE = re.compile(r"[A-Za-z0-9_=/.:+-]+\Z")

ENVELOPE_TYPES = ("run", "result", "problem", "list_engines", "engines", "ping", "pong")

WORKSPACE_VERSION = 1


class ProblemCode(str, Enum):
    PARSE_ERROR = "parse_error"
    SAFETY_ERROR = "safety_error"
    UNKNOWN_LANGUAGE = "unknown_language"
    UNKNOWN_ENGINE = "unknown_engine"
    OPTION_REJECTED = "option_rejected"
    EXECUTOR_UNAVAILABLE = "executor_unavailable"
    TIMEOUT = "timeout"
    ENGINE_FAILURE = "engine_failure"
    MALFORMED_MESSAGE = "malformed_message"


@dataclass(frozen=True)
class OptionEntry:
    name: str
    values: tuple[str, ...] = ()


@dataclass(frozen=True)
class RunRequest:
    language: str
    engine: str
    options: tuple[OptionEntry, ...] = ()
    sources: tuple[str, ...] = ()


@dataclass(frozen=True)
class RunResult:
    model: str
    error: str = ""


@dataclass(frozen=True)
class ProblemReport:
    code: ProblemCode
    detail: str


@dataclass(frozen=True)
class EngineInfo:
    """Registry snapshot entry; command templates never leave the executor."""

    language: str
    engine: str
    kind: str  # builtin | external
    allowed_options: tuple[str, ...] = ()
    default_timeout: float = 20.0


@dataclass(frozen=True)
class EngineListing:
    engines: tuple[EngineInfo, ...] = ()


Payload = Union[RunRequest, RunResult, ProblemReport, EngineListing, None]


@dataclass(frozen=True)
class Envelope:
    type: str
    id: str
    payload: Payload = None


@dataclass
class Tab:
    name: str
    text: str = ""
    run_selected: bool = True


@dataclass
class Settings:
    language: str = "asp"
    engine: str = "builtin"
    options: list[OptionEntry] = field(default_factory=list)
    auto_run: bool = False
    layout: dict[str, str] = field(default_factory=dict)


@dataclass
class Workspace:
    version: int = WORKSPACE_VERSION
    tabs: list[Tab] = field(default_factory=list)
    settings: Settings = field(default_factory=Settings)
    last_output: Optional[RunResult] = None


class _Malformed(Exception):
    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


def malformed(detail: str) -> ProblemReport:
    return ProblemReport(ProblemCode.MALFORMED_MESSAGE, detail)


def validate_run_request(req: RunRequest) -> Optional[str]:
    """First invariant violation as text, or None when the request is valid."""
    if not IDENTIFIER_RE.match(req.language):
        return f"language {req.language!r} is not a valid identifier"
    if not IDENTIFIER_RE.match(req.engine):
        return f"engine {req.engine!r} is not a valid identifier"
    for opt in req.options:
        if not opt.name or not OPTION_NAME_RE.match(opt.name):
            return f"option name {opt.name!r} is not allowed"
    return None


# --- encoding ---------------------------------------------------------------


def _option_doc(opt: OptionEntry) -> dict:
    return {"name": opt.name, "values": list(opt.values)}


def _payload_doc(payload: Payload) -> dict:
    if payload is None:
        return {}
    if isinstance(payload, RunRequest):
        return {
            "language": payload.language,
            "engine": payload.engine,
            "options": [_option_doc(o) for o in payload.options],
            "sources": list(payload.sources),
        }
    if isinstance(payload, RunResult):
        return {"model": payload.model, "error": payload.error}
    if isinstance(payload, ProblemReport):
        return {"code": payload.code.value, "detail": payload.detail}
    if isinstance(payload, EngineListing):
        return {
            "engines": [
                {
                    "language": e.language,
                    "engine": e.engine,
                    "kind": e.kind,
                    "allowed_options": list(e.allowed_options),
                    # normalized so int-valued timeouts encode canonically
                    "default_timeout": float(e.default_timeout),
                }
                for e in payload.engines
            ]
        }
    raise TypeError(f"cannot encode payload {payload!r}")


def encode(message: Envelope) -> bytes:
    """Canonical serialization of a valid envelope.

    Deterministic: identical messages produce identical bytes.  Raises
    ValueError for envelopes that violate the type invariants; validity
    is the sender's responsibility.
    """
    if message.type not in ENVELOPE_TYPES:
        raise ValueError(f"unknown envelope type {message.type!r}")
    if not isinstance(message.id, str):
        raise ValueError("envelope id must be a string")
    if isinstance(message.payload, RunRequest):
        error = validate_run_request(message.payload)
        if error:
            raise ValueError(error)
    doc = {"type": message.type, "id": message.id, "payload": _payload_doc(message.payload)}
    return json.dumps(doc, separators=(",", ":"), ensure_ascii=False).encode("utf-8")


# --- decoding ---------------------------------------------------------------


def _require(doc: Any, key: str, kind, where: str):
    if not isinstance(doc, dict):
        raise _Malformed(f"{where} must be an object")
    if key not in doc:
        raise _Malformed(f"{where}.{key} is missing")
    value = doc[key]
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise _Malformed(f"{where}.{key} must be a number")
        return float(value)
    if kind is bool:
        if not isinstance(value, bool):
            raise _Malformed(f"{where}.{key} must be a boolean")
        return value
    if not isinstance(value, kind):
        raise _Malformed(f"{where}.{key} has the wrong type")
    return value


def _string_list(value: Any, where: str) -> tuple[str, ...]:
    if not isinstance(value, list) or any(not isinstance(v, str) for v in value):
        raise _Malformed(f"{where} must be a list of strings")
    return tuple(value)


def _parse_options(value: Any, where: str) -> tuple[OptionEntry, ...]:
    if not isinstance(value, list):
        raise _Malformed(f"{where} must be a list")
    out = []
    for i, doc in enumerate(value):
        name = _require(doc, "name", str, f"{where}[{i}]")
        values = _string_list(_require(doc, "values", list, f"{where}[{i}]"), f"{where}[{i}].values")
        if not name or not OPTION_NAME_RE.match(name):
            raise _Malformed(f"{where}[{i}].name {name!r} is not allowed")
        out.append(OptionEntry(name, values))
    return tuple(out)


def _parse_run_request(doc: Any, where: str = "payload") -> RunRequest:
    req = RunRequest(
        language=_require(doc, "language", str, where),
        engine=_require(doc, "engine", str, where),
        options=_parse_options(_require(doc, "options", list, where), f"{where}.options"),
        sources=_string_list(_require(doc, "sources", list, where), f"{where}.sources"),
    )
    error = validate_run_request(req)
    if error:
        raise _Malformed(error)
    return req


def _parse_run_result(doc: Any, where: str = "payload") -> RunResult:
    return RunResult(
        model=_require(doc, "model", str, where),
        error=_require(doc, "error", str, where),
    )


def _parse_problem(doc: Any, where: str = "payload") -> ProblemReport:
    code = _require(doc, "code", str, where)
    detail = _require(doc, "detail", str, where)
    try:
        parsed = ProblemCode(code)
    except ValueError:
        raise _Malformed(f"{where}.code {code!r} is not a known problem code")
    if not detail:
        raise _Malformed(f"{where}.detail must be non-empty")
    return ProblemReport(parsed, detail)


def _parse_engines(doc: Any, where: str = "payload") -> EngineListing:
    entries = _require(doc, "engines", list, where)
    out = []
    for i, entry in enumerate(entries):
        at = f"{where}.engines[{i}]"
        language = _require(entry, "language", str, at)
        engine = _require(entry, "engine", str, at)
        kind = _require(entry, "kind", str, at)
        if not IDENTIFIER_RE.match(language) or not IDENTIFIER_RE.match(engine):
            raise _Malformed(f"{at} has an invalid language or engine identifier")
        if kind not in ("builtin", "external"):
            raise _Malformed(f"{at}.kind must be builtin or external")
        allowed = _string_list(_require(entry, "allowed_options", list, at), f"{at}.allowed_options")
        timeout = _require(entry, "default_timeout", float, at)
        out.append(EngineInfo(language, engine, kind, allowed, timeout))
    return EngineListing(tuple(out))


def _parse_payload(kind: str, doc: Any) -> Payload:
    if kind in ("ping", "pong", "list_engines"):
        if not isinstance(doc, dict):
            raise _Malformed("payload must be an object")
        return None
    if kind == "run":
        return _parse_run_request(doc)
    if kind == "result":
        return _parse_run_result(doc)
    if kind == "problem":
        return _parse_problem(doc)
    return _parse_engines(doc)


def decode(data: Union[bytes, str]) -> Union[Envelope, ProblemReport]:
    """Parse one wire frame.

    Returns the envelope, or a malformed_message report when the frame is
    not valid JSON, misses required fields, violates an invariant, or uses
    an unknown type.  Never raises on any byte input.
    """
    try:
        if isinstance(data, (bytes, bytearray)):
            text = bytes(data).decode("utf-8")
        else:
            text = data
    except UnicodeDecodeError:
        return malformed("frame is not valid UTF-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        return malformed(f"frame is not valid JSON: {exc.msg}")
    try:
        if not isinstance(doc, dict):
            raise _Malformed("frame must be a JSON object")
        kind = _require(doc, "type", str, "envelope")
        if kind not in ENVELOPE_TYPES:
            raise _Malformed(f"unknown envelope type {kind!r}")
        ident = _require(doc, "id", str, "envelope")
        payload = _parse_payload(kind, _require(doc, "payload", dict, "envelope"))
    except _Malformed as exc:
        return malformed(exc.detail)
    return Envelope(kind, ident, payload)


def salvage_id(data: Union[bytes, str]) -> str:
    """Best-effort extraction of the correlation id from a broken frame, so
    problem replies can still be matched by the sender."""
    try:
        if isinstance(data, (bytes, bytearray)):
            data = bytes(data).decode("utf-8")
        doc = json.loads(data)
        ident = doc.get("id") if isinstance(doc, dict) else None
        return ident if isinstance(ident, str) else ""
    except Exception:
        return ""


# --- workspace file format ---------------------------------------------------


def workspace_to_doc(ws: Workspace) -> dict:
    doc: dict = {
        "version": ws.version,
        "tabs": [
            {"name": t.name, "text": t.text, "run_selected": t.run_selected}
            for t in ws.tabs
        ],
        "settings": {
            "language": ws.settings.language,
            "engine": ws.settings.engine,
            "options": [_option_doc(o) for o in ws.settings.options],
            "auto_run": ws.settings.auto_run,
            "layout": {k: ws.settings.layout[k] for k in sorted(ws.settings.layout)},
        },
    }
    if ws.last_output is not None:
        doc["last_output"] = {"model": ws.last_output.model, "error": ws.last_output.error}
    return doc


def validate_workspace(doc: Any) -> Union[Workspace, ProblemReport]:
    """Check a parsed workspace document; reports the first offending field."""
    try:
        version = _require(doc, "version", int, "workspace")
        if isinstance(version, bool) or version != WORKSPACE_VERSION:
            raise _Malformed(f"workspace.version {version!r} is not supported")
        tabs = []
        names = set()
        for i, tab_doc in enumerate(_require(doc, "tabs", list, "workspace")):
            at = f"workspace.tabs[{i}]"
            name = _require(tab_doc, "name", str, at)
            if not name:
                raise _Malformed(f"{at}.name must be non-empty")
            if name in names:
                raise _Malformed(f"{at}.name {name!r} duplicates another tab")
            names.add(name)
            tabs.append(
                Tab(
                    name=name,
                    text=_require(tab_doc, "text", str, at),
                    run_selected=_require(tab_doc, "run_selected", bool, at),
                )
            )
        settings_doc = _require(doc, "settings", dict, "workspace")
        language = _require(settings_doc, "language", str, "workspace.settings")
        engine = _require(settings_doc, "engine", str, "workspace.settings")
        if not IDENTIFIER_RE.match(language):
            raise _Malformed(f"workspace.settings.language {language!r} is invalid")
        if not IDENTIFIER_RE.match(engine):
            raise _Malformed(f"workspace.settings.engine {engine!r} is invalid")
        options = _parse_options(
            _require(settings_doc, "options", list, "workspace.settings"),
            "workspace.settings.options",
        )
        auto_run = _require(settings_doc, "auto_run", bool, "workspace.settings")
        layout_doc = _require(settings_doc, "layout", dict, "workspace.settings")
        for key, value in layout_doc.items():
            if not isinstance(key, str) or not isinstance(value, str):
                raise _Malformed("workspace.settings.layout must map strings to strings")
        last_output = None
        if doc.get("last_output") is not None:
            last_output = _parse_run_result(doc["last_output"], "workspace.last_output")
    except _Malformed as exc:
        return malformed(exc.detail)
    return Workspace(
        version=version,
        tabs=tabs,
        settings=Settings(
            language=language,
            engine=engine,
            options=list(options),
            auto_run=auto_run,
            layout=dict(layout_doc),
        ),
        last_output=last_output,
    )
