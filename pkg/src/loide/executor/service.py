"""WebSocket service wrapping the engine registry and run pipeline.

Accepts `run`, `list_engines`, and `ping` envelopes on /ws and answers
every request with exactly one reply carrying the same correlation id.
Runs execute concurrently per connection; a per-connection lock keeps
reply frames from interleaving.
"""

from __future__ import annotations

import argparse
import asyncio
import http
import logging
import os
import signal
from typing import Optional, Union

from websockets.asyncio.server import ServerConnection, serve
from websockets.exceptions import ConnectionClosed

from .. import config
from ..protocol import (
    Envelope,
    EngineListing,
    ProblemCode,
    ProblemReport,
    RunRequest,
    RunResult,
    decode,
    encode,
    malformed,
    salvage_id,
)
from .jobs import JobManager
from .registry import Registry, build_registry
from .runner import run_request

log = logging.getLogger(__name__)

# Generous hard limit; the gateway applies the public 1 MiB policy.
MAX_FRAME_BYTES = 2**21


class ExecutorService:
    def __init__(self, registry: Registry, max_jobs: Optional[int] = None):
        self.registry = registry
        self.jobs = JobManager(max_jobs) if max_jobs else JobManager()

    async def handle(self, ws: ServerConnection) -> None:
        send_lock = asyncio.Lock()
        tasks: set[asyncio.Task] = set()
        try:
            async for frame in ws:
                message = decode(frame)
                if isinstance(message, ProblemReport):
                    await self._send(
                        ws, send_lock, Envelope("problem", salvage_id(frame), message)
                    )
                    continue
                if message.type == "run":
                    task = asyncio.create_task(
                        self._run_and_reply(ws, send_lock, message)
                    )
                    tasks.add(task)
                    task.add_done_callback(tasks.discard)
                    continue
                await self._send(ws, send_lock, self._quick_reply(message))
        except ConnectionClosed:
            pass  # peer vanished without a close handshake; routine
        finally:
            for task in tasks:
                task.cancel()

    def _quick_reply(self, message: Envelope) -> Envelope:
        """Everything except a run is answered synchronously."""
        if message.type == "ping":
            return Envelope("pong", message.id)
        if message.type == "list_engines":
            return Envelope(
                "engines", message.id, EngineListing(self.registry.snapshot())
            )
        return Envelope(
            "problem",
            message.id,
            malformed(f"executor does not accept {message.type!r} envelopes"),
        )

    async def _run_and_reply(
        self, ws: ServerConnection, send_lock: asyncio.Lock, message: Envelope
    ) -> None:
        assert isinstance(message.payload, RunRequest)
        try:
            outcome = await run_request(
                message.payload, self.registry, self.jobs, message.id
            )
        except Exception:
            log.exception("run %s failed unexpectedly", message.id)
            outcome = ProblemReport(
                ProblemCode.ENGINE_FAILURE, "internal executor error"
            )
        await self._send(ws, send_lock, _outcome_envelope(message.id, outcome))

    async def _send(
        self, ws: ServerConnection, lock: asyncio.Lock, message: Envelope
    ) -> None:
        data = encode(message).decode("utf-8")
        try:
            async with lock:
                await ws.send(data, text=True)
        except Exception:
            log.debug("reply for %s dropped: connection gone", message.id)


def _outcome_envelope(
    ident: str, outcome: Union[RunResult, ProblemReport]
) -> Envelope:
    if isinstance(outcome, RunResult):
        return Envelope("result", ident, outcome)
    return Envelope("problem", ident, outcome)


def _process_request(connection: ServerConnection, request):
    path = request.path.split("?", 1)[0]
    if path != config.WS_PATH:
        return connection.respond(http.HTTPStatus.NOT_FOUND, "not found\n")
    return None


async def start_server(service: ExecutorService, bind: str):
    """Bind and return the listening server; `.close()` to stop.  Port 0
    picks a free port — read it back from `sockets[0].getsockname()`."""
    host, port = config.parse_bind(bind)
    return await serve(
        service.handle,
        host,
        port,
        process_request=_process_request,
        max_size=MAX_FRAME_BYTES,
    )


async def serve_forever(
    bind: str, registry: Registry, max_jobs: Optional[int] = None
) -> None:
    server = await start_server(ExecutorService(registry, max_jobs), bind)
    try:
        host, port = server.sockets[0].getsockname()[:2]
        log.info("executor listening on ws://%s:%s%s", host, port, config.WS_PATH)
        await asyncio.get_running_loop().create_future()
    finally:
        server.close()
        await server.wait_closed()


def main(argv: Optional[list[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="loide-executor",
        description="Solver execution service (WebSocket, one reply per request).",
    )
    parser.add_argument(
        "--bind",
        default=config.env_or(config.ENV_EXECUTOR_BIND, config.DEFAULT_EXECUTOR_BIND),
        help="host:port to listen on (env %s)" % config.ENV_EXECUTOR_BIND,
    )
    parser.add_argument(
        "--engines-file",
        default=os.environ.get(config.ENV_ENGINES_FILE) or None,
        help="JSON file with external engine descriptors (env %s)"
        % config.ENV_ENGINES_FILE,
    )
    parser.add_argument(
        "--max-jobs",
        type=int,
        default=None,
        help="cap on concurrently executing runs (default: CPU count)",
    )
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO, format="%(asctime)s %(name)s %(levelname)s %(message)s"
    )
    registry = build_registry(args.engines_file)
    try:
        asyncio.run(serve_forever(args.bind, registry, args.max_jobs))
    except KeyboardInterrupt:
        pass
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
