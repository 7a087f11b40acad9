"""Public-facing server: client sessions over WebSocket plus the static UI.

The gateway validates every inbound frame, answers pings itself, and
forwards runs and engine listings to the executor over a shared link.
It never interprets programs or results — model and error text pass
through byte-for-byte.  Each session's replies are serialized on a
per-connection lock; one client's garbage never disturbs another's
session.
"""

from __future__ import annotations

import argparse
import asyncio
import http
import logging
import mimetypes
import time
import urllib.parse
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

from websockets.asyncio.server import ServerConnection, serve
from websockets.datastructures import Headers
from websockets.exceptions import ConnectionClosed
from websockets.http11 import Request, Response

from .. import config
from ..protocol import (
    Envelope,
    ProblemCode,
    ProblemReport,
    decode,
    encode,
    malformed,
    salvage_id,
)
from .link import DEFAULT_FORWARD_DEADLINE, ExecutorLink, LinkDown

log = logging.getLogger(__name__)

MAX_FRAME_BYTES = 2**20  # policy cap: answered with a problem, not a disconnect
MAX_OPEN_RUNS = 8
_HARD_FRAME_BYTES = 2**22  # absolute transport limit


@dataclass
class GatewayConfig:
    bind: str = config.DEFAULT_GATEWAY_BIND
    executor_url: str = ""
    static_dir: Optional[str] = None
    max_frame_bytes: int = MAX_FRAME_BYTES
    max_open_runs: int = MAX_OPEN_RUNS
    forward_deadline: float = DEFAULT_FORWARD_DEADLINE

    @classmethod
    def from_env(cls) -> "GatewayConfig":
        return cls(
            bind=config.env_or(config.ENV_BIND, config.DEFAULT_GATEWAY_BIND),
            executor_url=config.env_or(
                config.ENV_EXECUTOR_URL,
                config.ws_url_for_bind(config.DEFAULT_EXECUTOR_BIND),
            ),
            static_dir=config.env_or(config.ENV_STATIC_DIR, "") or None,
        )


@dataclass
class SessionState:
    session_id: str
    open_runs: dict[str, float] = field(default_factory=dict)


def default_static_dir() -> Path:
    return Path(__file__).resolve().parent.parent / "static"


class GatewayServer:
    def __init__(self, cfg: GatewayConfig):
        self.cfg = cfg
        self.static_root = Path(cfg.static_dir or default_static_dir()).resolve()
        self.link = ExecutorLink(
            cfg.executor_url, forward_deadline=cfg.forward_deadline
        )

    # --- session handling ----------------------------------------------------

    async def handle(self, ws: ServerConnection) -> None:
        session = SessionState(session_id=uuid.uuid4().hex)
        lock = asyncio.Lock()
        tasks: set[asyncio.Task] = set()

        def spawn(coro) -> None:
            task = asyncio.create_task(coro)
            tasks.add(task)
            task.add_done_callback(tasks.discard)

        log.info("session %s opened", session.session_id)
        try:
            async for frame in ws:
                size = (
                    len(frame)
                    if isinstance(frame, (bytes, bytearray))
                    else len(frame.encode("utf-8"))
                )
                if size > self.cfg.max_frame_bytes:
                    await self._send(
                        ws,
                        lock,
                        Envelope(
                            "problem",
                            salvage_id(frame),
                            malformed(
                                f"frame of {size} bytes exceeds the "
                                f"{self.cfg.max_frame_bytes} byte limit"
                            ),
                        ),
                    )
                    continue
                message = decode(frame)
                if isinstance(message, ProblemReport):
                    await self._send(
                        ws, lock, Envelope("problem", salvage_id(frame), message)
                    )
                    continue
                if message.type == "ping":
                    await self._send(ws, lock, Envelope("pong", message.id))
                elif message.type == "list_engines":
                    spawn(self._relay_listing(ws, lock, message))
                elif message.type == "run":
                    reject = self._admit_run(session, message)
                    if reject is not None:
                        await self._send(ws, lock, reject)
                    else:
                        spawn(self._relay_run(ws, lock, session, message))
                else:
                    await self._send(
                        ws,
                        lock,
                        Envelope(
                            "problem",
                            message.id,
                            malformed(
                                f"gateway does not accept {message.type!r} envelopes"
                            ),
                        ),
                    )
        except ConnectionClosed:
            pass  # peer vanished without a close handshake; routine
        finally:
            for task in tasks:
                task.cancel()
            log.info("session %s closed", session.session_id)

    def _admit_run(
        self, session: SessionState, message: Envelope
    ) -> Optional[Envelope]:
        if message.id in session.open_runs:
            return Envelope(
                "problem",
                message.id,
                malformed(f"run id {message.id!r} is already in flight"),
            )
        if len(session.open_runs) >= self.cfg.max_open_runs:
            return Envelope(
                "problem",
                message.id,
                ProblemReport(
                    ProblemCode.EXECUTOR_UNAVAILABLE,
                    f"session already has {self.cfg.max_open_runs} runs open; "
                    "wait for one to finish",
                ),
            )
        session.open_runs[message.id] = time.time()
        return None

    async def _relay_run(
        self,
        ws: ServerConnection,
        lock: asyncio.Lock,
        session: SessionState,
        message: Envelope,
    ) -> None:
        try:
            reply = await self.link.request("run", message.payload)
            out = self._restamp(reply, message.id)
        except LinkDown as exc:
            out = Envelope(
                "problem",
                message.id,
                ProblemReport(ProblemCode.EXECUTOR_UNAVAILABLE, str(exc)),
            )
        finally:
            session.open_runs.pop(message.id, None)
        await self._send(ws, lock, out)

    async def _relay_listing(
        self, ws: ServerConnection, lock: asyncio.Lock, message: Envelope
    ) -> None:
        try:
            reply = await self.link.request("list_engines")
            out = self._restamp(reply, message.id)
        except LinkDown as exc:
            out = Envelope(
                "problem",
                message.id,
                ProblemReport(ProblemCode.EXECUTOR_UNAVAILABLE, str(exc)),
            )
        await self._send(ws, lock, out)

    @staticmethod
    def _restamp(reply: Envelope, client_id: str) -> Envelope:
        """Put the client's correlation id back on; payload passes untouched."""
        if reply.type in ("result", "problem", "engines"):
            return Envelope(reply.type, client_id, reply.payload)
        return Envelope(
            "problem",
            client_id,
            ProblemReport(
                ProblemCode.EXECUTOR_UNAVAILABLE,
                f"executor sent an unexpected {reply.type!r} envelope",
            ),
        )

    async def _send(
        self, ws: ServerConnection, lock: asyncio.Lock, message: Envelope
    ) -> None:
        data = encode(message).decode("utf-8")
        try:
            async with lock:
                await ws.send(data, text=True)
        except Exception:
            log.debug("reply for %s dropped: session gone", message.id)

    # --- static files ----------------------------------------------------------

    def process_request(self, connection: ServerConnection, request: Request):
        path = request.path.split("?", 1)[0]
        if path == config.WS_PATH:
            return None  # proceed with the WebSocket handshake
        return self._static_response(connection, path)

    def _static_response(self, connection: ServerConnection, raw_path: str):
        path = urllib.parse.unquote(raw_path)
        relative = path.lstrip("/") or "index.html"
        try:
            target = (self.static_root / relative).resolve()
        except OSError:
            return connection.respond(http.HTTPStatus.NOT_FOUND, "not found\n")
        if not target.is_relative_to(self.static_root):
            return connection.respond(http.HTTPStatus.NOT_FOUND, "not found\n")
        if target.is_dir():
            target = target / "index.html"
        if not target.is_file():
            return connection.respond(http.HTTPStatus.NOT_FOUND, "not found\n")
        body = target.read_bytes()
        ctype = mimetypes.guess_type(target.name)[0] or "application/octet-stream"
        headers = Headers(
            [
                ("Content-Type", ctype),
                ("Content-Length", str(len(body))),
                ("Cache-Control", "no-cache"),
            ]
        )
        return Response(http.HTTPStatus.OK, "OK", headers, body)

    # --- lifecycle ---------------------------------------------------------------

    async def start(self):
        """Open the executor link and bind the public server; returns the
        listening server.  Call `shutdown()` when done."""
        host, port = config.parse_bind(self.cfg.bind)
        self.link.start()
        return await serve(
            self.handle,
            host,
            port,
            process_request=self.process_request,
            max_size=_HARD_FRAME_BYTES,
        )

    async def shutdown(self, server) -> None:
        server.close()
        await server.wait_closed()
        await self.link.stop()

    async def serve_forever(self) -> None:
        server = await self.start()
        try:
            host, port = server.sockets[0].getsockname()[:2]
            log.info(
                "gateway on http://%s:%s/ (ws at %s), executor at %s, static %s",
                host,
                port,
                config.WS_PATH,
                self.cfg.executor_url,
                self.static_root,
            )
            await asyncio.get_running_loop().create_future()
        finally:
            await self.shutdown(server)


def main(argv: Optional[list[str]] = None) -> int:
    env = GatewayConfig.from_env()
    parser = argparse.ArgumentParser(
        prog="loide-gateway",
        description="Public WebSocket gateway and static UI server.",
    )
    parser.add_argument(
        "--bind",
        default=env.bind,
        help="host:port to listen on (env %s)" % config.ENV_BIND,
    )
    parser.add_argument(
        "--executor-url",
        default=env.executor_url,
        help="executor WebSocket URL (env %s)" % config.ENV_EXECUTOR_URL,
    )
    parser.add_argument(
        "--static-dir",
        default=env.static_dir,
        help="directory with the UI bundle (env %s; default: packaged page)"
        % config.ENV_STATIC_DIR,
    )
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO, format="%(asctime)s %(name)s %(levelname)s %(message)s"
    )
    cfg = GatewayConfig(
        bind=args.bind, executor_url=args.executor_url, static_dir=args.static_dir
    )
    try:
        asyncio.run(GatewayServer(cfg).serve_forever())
    except KeyboardInterrupt:
        pass
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
