"""Headless runner for scripts and CI.

`loide run prog.lp` executes in-process with the built-in engine by
default so no services are needed; `--executor ws://host:port/ws` (or
the LOIDE_EXECUTOR_URL environment variable) sends the same request
over the wire instead.

Exit status: 0 for a clean result, 1 when the solver reported an error,
2 for usage mistakes and protocol-level problems.
"""

from __future__ import annotations

import argparse
import asyncio
import os
import sys
import time
from pathlib import Path
from typing import Optional, Union

from websockets.sync.client import connect

from . import config
from .executor.registry import DEFAULT_TIMEOUT, build_registry
from .executor.runner import run_request
from .protocol import (
    Envelope,
    OptionEntry,
    ProblemCode,
    ProblemReport,
    RunRequest,
    RunResult,
    decode,
    encode,
)
from .workspace import compose_request, import_workspace

# Problems caused by the program or its execution; everything else is a
# usage or protocol mistake.
_SOLVER_PROBLEMS = frozenset(
    {
        ProblemCode.PARSE_ERROR,
        ProblemCode.SAFETY_ERROR,
        ProblemCode.TIMEOUT,
        ProblemCode.ENGINE_FAILURE,
    }
)

_REPLY_MARGIN = 40.0  # wall-clock slack on top of the solver timeout


class _UsageError(Exception):
    pass


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="loide", description="Run logic programs from the command line."
    )
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="execute source files or a workspace")
    run.add_argument("files", nargs="*", help="program files, concatenated in order")
    run.add_argument("--workspace", help="workspace .json file to compose and run")
    run.add_argument("--language", help="language identifier (default asp)")
    run.add_argument("--engine", help="engine identifier (default builtin)")
    run.add_argument(
        "--opt",
        action="append",
        default=[],
        metavar="NAME[=VALUE]",
        help="engine option, repeatable",
    )
    run.add_argument("--timeout", type=float, help="solver timeout in seconds")
    run.add_argument(
        "--filter",
        dest="filter_names",
        metavar="P1,P2",
        help="only show these predicates in answer sets",
    )
    run.add_argument(
        "--executor",
        default=os.environ.get(config.ENV_EXECUTOR_URL) or None,
        help="executor WebSocket URL (env %s); default: run in-process"
        % config.ENV_EXECUTOR_URL,
    )
    return parser


def _request_from_args(args) -> RunRequest:
    if args.workspace and args.files:
        raise _UsageError("give either source files or --workspace, not both")
    if not args.workspace and not args.files:
        raise _UsageError("nothing to run: give source files or --workspace")

    if args.workspace:
        try:
            raw = Path(args.workspace).read_bytes()
        except OSError as exc:
            raise _UsageError(f"cannot read workspace: {exc}")
        loaded = import_workspace(raw)
        if isinstance(loaded, ProblemReport):
            raise _UsageError(f"bad workspace file: {loaded.detail}")
        base = compose_request(loaded)
    else:
        sources = []
        for name in args.files:
            try:
                sources.append(Path(name).read_text(encoding="utf-8"))
            except OSError as exc:
                raise _UsageError(f"cannot read {name}: {exc}")
        base = RunRequest(language="asp", engine="builtin", sources=tuple(sources))

    options = list(base.options)
    for raw_opt in args.opt:
        name, sep, value = raw_opt.partition("=")
        if not name:
            raise _UsageError(f"bad --opt {raw_opt!r}")
        options.append(OptionEntry(name, (value,) if sep else ()))
    if args.timeout is not None:
        options.append(OptionEntry("timeout", (str(args.timeout),)))
    if args.filter_names:
        options.append(OptionEntry("filter", (args.filter_names,)))

    return RunRequest(
        language=args.language or base.language,
        engine=args.engine or base.engine,
        options=tuple(options),
        sources=base.sources,
    )


def _run_local(req: RunRequest) -> Union[RunResult, ProblemReport]:
    registry = build_registry(os.environ.get(config.ENV_ENGINES_FILE) or None)
    return asyncio.run(run_request(req, registry))


def _run_remote(
    url: str, req: RunRequest, wall: float
) -> Union[RunResult, ProblemReport]:
    try:
        with connect(url, max_size=2**21, open_timeout=5) as ws:
            ws.send(encode(Envelope("run", "cli", req)).decode("utf-8"), text=True)
            deadline = time.monotonic() + wall
            while True:
                frame = ws.recv(timeout=max(0.1, deadline - time.monotonic()))
                message = decode(frame)
                if isinstance(message, ProblemReport):
                    return message
                if message.id != "cli":
                    continue
                if message.type in ("result", "problem"):
                    return message.payload  # type: ignore[return-value]
                return ProblemReport(
                    ProblemCode.MALFORMED_MESSAGE,
                    f"unexpected reply type {message.type!r}",
                )
    except TimeoutError:
        return ProblemReport(
            ProblemCode.EXECUTOR_UNAVAILABLE, f"no reply from {url} in {wall:g}s"
        )
    except Exception as exc:
        return ProblemReport(
            ProblemCode.EXECUTOR_UNAVAILABLE, f"cannot reach {url}: {exc}"
        )


def _report(outcome: Union[RunResult, ProblemReport]) -> int:
    if isinstance(outcome, RunResult):
        if outcome.model:
            sys.stdout.write(outcome.model)
            if not outcome.model.endswith("\n"):
                sys.stdout.write("\n")
        if outcome.error:
            sys.stderr.write(outcome.error)
            if not outcome.error.endswith("\n"):
                sys.stderr.write("\n")
            return 1
        return 0
    sys.stderr.write(f"{outcome.code.value}: {outcome.detail}\n")
    return 1 if outcome.code in _SOLVER_PROBLEMS else 2


def main(argv: Optional[list[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        req = _request_from_args(args)
    except _UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    if args.executor:
        wall = (args.timeout or DEFAULT_TIMEOUT) + _REPLY_MARGIN
        outcome = _run_remote(args.executor, req, wall)
    else:
        outcome = _run_local(req)
    return _report(outcome)


if __name__ == "__main__":
    raise SystemExit(main())
