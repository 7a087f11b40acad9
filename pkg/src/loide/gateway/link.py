"""Persistent connection from the gateway to the executor service.

One link is shared by every client session.  It reconnects forever with
exponential backoff (capped), correlates replies to callers through
fresh internal ids — client-chosen correlation ids never reach the
executor, so two sessions reusing the same id cannot collide — and fails
all waiting callers the moment the connection drops.
"""

from __future__ import annotations

import asyncio
import logging
import uuid
from enum import Enum
from typing import Optional

from websockets.asyncio.client import connect

from ..protocol import Envelope, Payload, ProblemReport, decode, encode

log = logging.getLogger(__name__)

BACKOFF_START = 0.1
BACKOFF_CAP = 5.0
# An answer promised "within 1 s" when the executor is down must leave
# room for the problem envelope itself, hence < 1.
DEFAULT_FORWARD_DEADLINE = 0.8

_LINK_FRAME_BYTES = 2**21


class LinkState(str, Enum):
    CONNECTED = "connected"
    RECONNECTING = "reconnecting"
    DOWN = "down"


class LinkDown(Exception):
    """The executor cannot be reached right now."""


class ExecutorLink:
    def __init__(
        self,
        url: str,
        *,
        forward_deadline: float = DEFAULT_FORWARD_DEADLINE,
        backoff_start: float = BACKOFF_START,
        backoff_cap: float = BACKOFF_CAP,
    ):
        self.url = url
        self.forward_deadline = forward_deadline
        self.backoff_start = backoff_start
        self.backoff_cap = backoff_cap
        self._pending: dict[str, asyncio.Future] = {}
        self._conn = None
        self._connected = asyncio.Event()
        self._task: Optional[asyncio.Task] = None
        self._send_lock = asyncio.Lock()

    # --- lifecycle ---------------------------------------------------------

    def start(self) -> None:
        if self._task is None:
            self._task = asyncio.create_task(self._maintain(), name="executor-link")

    async def stop(self) -> None:
        task, self._task = self._task, None
        if task is not None:
            task.cancel()
            try:
                await task
            except asyncio.CancelledError:
                pass
        self._fail_pending("gateway shutting down")

    @property
    def state(self) -> LinkState:
        if self._connected.is_set():
            return LinkState.CONNECTED
        if self._task is not None and not self._task.done():
            return LinkState.RECONNECTING
        return LinkState.DOWN

    async def _maintain(self) -> None:
        delay = self.backoff_start
        while True:
            try:
                async with connect(self.url, max_size=_LINK_FRAME_BYTES) as ws:
                    log.info("executor link up: %s", self.url)
                    self._conn = ws
                    self._connected.set()
                    delay = self.backoff_start
                    try:
                        async for frame in ws:
                            self._dispatch(frame)
                    finally:
                        self._connected.clear()
                        self._conn = None
                        self._fail_pending("executor connection lost")
                        log.warning("executor link lost: %s", self.url)
            except asyncio.CancelledError:
                raise
            except Exception as exc:
                self._connected.clear()
                self._conn = None
                self._fail_pending("executor connection lost")
                log.debug("executor connect failed (%s); retrying in %.1fs", exc, delay)
            await asyncio.sleep(delay)
            delay = min(delay * 2, self.backoff_cap)

    # --- correlation -------------------------------------------------------

    def _dispatch(self, frame) -> None:
        message = decode(frame)
        if isinstance(message, ProblemReport):
            log.warning("undecodable frame from executor: %s", message.detail)
            return
        waiter = self._pending.pop(message.id, None)
        if waiter is None or waiter.done():
            log.warning("stray executor reply id=%s type=%s", message.id, message.type)
            return
        waiter.set_result(message)

    def _fail_pending(self, reason: str) -> None:
        pending, self._pending = self._pending, {}
        for waiter in pending.values():
            if not waiter.done():
                waiter.set_exception(LinkDown(reason))

    # --- request/reply -----------------------------------------------------

    async def request(self, kind: str, payload: Payload = None) -> Envelope:
        """Forward one request envelope; return the executor's reply.

        Raises LinkDown when no connection exists within the forward
        deadline or the connection dies before the reply arrives.
        """
        try:
            await asyncio.wait_for(self._connected.wait(), self.forward_deadline)
        except asyncio.TimeoutError:
            raise LinkDown("executor is unreachable")
        conn = self._conn
        if conn is None:
            raise LinkDown("executor is unreachable")
        internal_id = uuid.uuid4().hex
        waiter = asyncio.get_running_loop().create_future()
        self._pending[internal_id] = waiter
        try:
            data = encode(Envelope(kind, internal_id, payload)).decode("utf-8")
            async with self._send_lock:
                await conn.send(data, text=True)
            return await waiter
        except LinkDown:
            raise
        except Exception as exc:
            raise LinkDown(f"executor send failed: {exc}")
        finally:
            self._pending.pop(internal_id, None)
