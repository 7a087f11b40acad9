"""Solver execution service: engine registry, run pipeline, WebSocket server."""

from .jobs import Job, JobManager, JobState, default_max_jobs
from .registry import (
    BUILTIN_ASP,
    DEFAULT_TIMEOUT,
    MAX_TIMEOUT,
    EngineDescriptor,
    Registry,
    build_registry,
    load_engines_file,
    parse_descriptor,
)
from .runner import compose_program, run_request
from .service import ExecutorService, serve_forever, start_server

__all__ = [
    "BUILTIN_ASP",
    "DEFAULT_TIMEOUT",
    "MAX_TIMEOUT",
    "EngineDescriptor",
    "ExecutorService",
    "Job",
    "JobManager",
    "JobState",
    "Registry",
    "build_registry",
    "compose_program",
    "default_max_jobs",
    "load_engines_file",
    "parse_descriptor",
    "run_request",
    "serve_forever",
    "start_server",
]
