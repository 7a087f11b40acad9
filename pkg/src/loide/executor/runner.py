"""Run a request on the built-in engine or an external solver process.

Sources are concatenated with newlines into one program text.  External
solvers get the program as a temp file substituted into their command
template and are killed (whole process group) at the deadline; temp
files are removed on every path.
"""

from __future__ import annotations

import asyncio
import logging
import os
import signal
import tempfile
import time
from typing import Optional, Union

from .. import asp
from ..protocol import (
    OptionEntry,
    ProblemCode,
    ProblemReport,
    RunRequest,
    RunResult,
)
from .jobs import JobManager
from .registry import FILE_PLACEHOLDER, EngineDescriptor, Registry

log = logging.getLogger(__name__)

RESERVED_TIMEOUT_OPTION = "timeout"

# Grace added to the hard kill of external processes so the solver's own
# deadline handling (if any) gets a chance to produce output first.
_KILL_GRACE = 0.2


class _OptionError(Exception):
    def __init__(self, report: ProblemReport):
        self.report = report


def compose_program(sources) -> str:
    """Composition rule: selected sources joined with a newline."""
    return "\n".join(sources)


def _parse_timeout_option(opt: OptionEntry) -> Optional[float]:
    """The reserved option may be spelled name="timeout" values=["5"] or as
    a bare name "timeout=5"."""
    raw: Optional[str] = None
    if opt.name == RESERVED_TIMEOUT_OPTION:
        raw = opt.values[0] if opt.values else None
    elif opt.name.startswith(RESERVED_TIMEOUT_OPTION + "="):
        raw = opt.name.split("=", 1)[1]
    else:
        return None
    try:
        seconds = float(raw)  # type: ignore[arg-type]
    except (TypeError, ValueError):
        raise _OptionError(
            ProblemReport(
                ProblemCode.OPTION_REJECTED,
                f"option {opt.name!r} needs a number of seconds",
            )
        )
    if seconds <= 0:
        raise _OptionError(
            ProblemReport(ProblemCode.OPTION_REJECTED, "timeout must be positive")
        )
    return seconds


def _screen_options(
    req: RunRequest, desc: EngineDescriptor
) -> tuple[list[OptionEntry], float]:
    """Apply the whitelist; returns pass-through options and the deadline."""
    passed: list[OptionEntry] = []
    timeout = desc.default_timeout
    for opt in req.options:
        requested = _parse_timeout_option(opt)
        if requested is not None:
            timeout = min(requested, desc.max_timeout)
            continue
        if not desc.allows_option(opt.name):
            raise _OptionError(
                ProblemReport(
                    ProblemCode.OPTION_REJECTED,
                    f"option {opt.name!r} is not allowed for "
                    f"{desc.language}/{desc.engine}",
                )
            )
        passed.append(opt)
    return passed, timeout


def _filter_predicates(options: list[OptionEntry]) -> Optional[set[str]]:
    names: set[str] = set()
    seen = False
    for opt in options:
        if opt.name != "filter":
            continue
        seen = True
        for value in opt.values:
            names.update(v for v in value.split(",") if v)
    return names if seen else None


def _run_builtin(
    program: str, options: list[OptionEntry], deadline: float
) -> Union[RunResult, ProblemReport]:
    try:
        sets = asp.solve(program, deadline=deadline)
        model = asp.format_output(sets, _filter_predicates(options))
        return RunResult(model=model, error="")
    except asp.ParseError as exc:
        return ProblemReport(ProblemCode.PARSE_ERROR, str(exc))
    except asp.SafetyError as exc:
        return ProblemReport(ProblemCode.SAFETY_ERROR, str(exc))
    except asp.SolveTimeout as exc:
        return ProblemReport(ProblemCode.TIMEOUT, str(exc))
    except asp.EngineError as exc:
        # grounding cap, answer-set cap
        return ProblemReport(ProblemCode.ENGINE_FAILURE, str(exc))


async def _run_external(
    desc: EngineDescriptor,
    program: str,
    options: list[OptionEntry],
    timeout: float,
) -> Union[RunResult, ProblemReport]:
    fd, path = tempfile.mkstemp(prefix="loide-", suffix=".lp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(program)
        argv = [arg.replace(FILE_PLACEHOLDER, path) for arg in desc.command_template]
        for opt in options:
            argv.append(opt.name)
            argv.extend(opt.values)
        try:
            proc = await asyncio.create_subprocess_exec(
                *argv,
                stdout=asyncio.subprocess.PIPE,
                stderr=asyncio.subprocess.PIPE,
                stdin=asyncio.subprocess.DEVNULL,
                start_new_session=True,
            )
        except OSError as exc:
            return ProblemReport(
                ProblemCode.ENGINE_FAILURE,
                f"cannot launch {desc.language}/{desc.engine}: {exc}",
            )
        try:
            stdout, stderr = await asyncio.wait_for(
                proc.communicate(), timeout=timeout + _KILL_GRACE
            )
        except asyncio.TimeoutError:
            _kill_process_group(proc.pid)
            # drain and reap so the pipe transports close inside the loop
            await proc.communicate()
            return ProblemReport(
                ProblemCode.TIMEOUT,
                f"{desc.language}/{desc.engine} exceeded {timeout:g}s and was killed",
            )
        model = stdout.decode("utf-8", errors="replace")
        error = stderr.decode("utf-8", errors="replace")
        if proc.returncode != 0 and not model:
            return ProblemReport(
                ProblemCode.ENGINE_FAILURE,
                f"{desc.language}/{desc.engine} exited with status "
                f"{proc.returncode}: {error.strip()[-500:] or 'no output'}",
            )
        return RunResult(model=model, error=error)
    finally:
        try:
            os.unlink(path)
        except OSError:
            pass


def _kill_process_group(pid: int) -> None:
    """SIGKILL the solver and everything it spawned (it leads its own
    session, so the group id is its pid)."""
    try:
        os.killpg(pid, signal.SIGKILL)
    except ProcessLookupError:
        pass
    except PermissionError:
        log.warning("could not kill process group %d", pid)


async def run_request(
    req: RunRequest,
    registry: Registry,
    jobs: Optional[JobManager] = None,
    job_id: str = "",
) -> Union[RunResult, ProblemReport]:
    """Execute one run request; all validation happens here.

    Returns exactly one RunResult or ProblemReport.
    """
    desc = registry.lookup(req.language, req.engine)
    if desc is None:
        if not registry.has_language(req.language):
            return ProblemReport(
                ProblemCode.UNKNOWN_LANGUAGE,
                f"no engines are registered for language {req.language!r}",
            )
        return ProblemReport(
            ProblemCode.UNKNOWN_ENGINE,
            f"language {req.language!r} has no engine {req.engine!r}",
        )
    try:
        options, timeout = _screen_options(req, desc)
    except _OptionError as exc:
        return exc.report

    program = compose_program(req.sources)
    jobs = jobs or JobManager()
    job = jobs.create(req, job_id)
    try:
        async with jobs.slot():
            job.start(timeout)
            if desc.kind == "builtin":
                deadline = time.monotonic() + timeout
                return await asyncio.to_thread(_run_builtin, program, options, deadline)
            return await _run_external(desc, program, options, timeout)
    finally:
        jobs.release(job)
