"""Shared helpers: in-process servers, service subprocesses, stub engines."""

from __future__ import annotations

import json
import os
import socket
import subprocess
import sys
import textwrap
import time
from contextlib import asynccontextmanager

from loide.executor.registry import Registry, build_registry, parse_descriptor
from loide.executor.service import ExecutorService, start_server
from loide.gateway.server import GatewayConfig, GatewayServer


def free_port() -> int:
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]


def bound_url(server) -> str:
    host, port = server.sockets[0].getsockname()[:2]
    return f"ws://{host}:{port}/ws"


@asynccontextmanager
async def executor_running(registry: Registry = None, max_jobs: int = None):
    """In-process executor bound to an ephemeral port; yields its ws URL."""
    service = ExecutorService(registry or build_registry(None), max_jobs)
    server = await start_server(service, "127.0.0.1:0")
    try:
        yield bound_url(server)
    finally:
        server.close()
        await server.wait_closed()


@asynccontextmanager
async def gateway_running(executor_url: str, **cfg_overrides):
    """In-process gateway on an ephemeral port; yields (base_url, gateway).

    The WebSocket endpoint is `base_url + "/ws"`; other paths serve files.
    """
    cfg = GatewayConfig(
        bind="127.0.0.1:0", executor_url=executor_url, **cfg_overrides
    )
    gateway = GatewayServer(cfg)
    server = await gateway.start()
    try:
        host, port = server.sockets[0].getsockname()[:2]
        yield f"ws://{host}:{port}", gateway
    finally:
        await gateway.shutdown(server)


def wait_ws_ready(url: str, timeout: float = 8.0) -> None:
    """Block until a WebSocket service answers at `url`."""
    from websockets.sync.client import connect

    deadline = time.monotonic() + timeout
    last = None
    while time.monotonic() < deadline:
        try:
            with connect(url, open_timeout=1):
                return
        except Exception as exc:
            last = exc
            time.sleep(0.05)
    raise RuntimeError(f"service at {url} never came up: {last}")


def spawn_executor(port: int, engines_file: str = None) -> subprocess.Popen:
    cmd = [sys.executable, "-m", "loide.executor", "--bind", f"127.0.0.1:{port}"]
    if engines_file:
        cmd += ["--engines-file", engines_file]
    return subprocess.Popen(
        cmd, stdout=subprocess.DEVNULL, stderr=subprocess.DEVNULL
    )


def stub_engine(tmp_path, name: str, body: str, **descriptor) -> dict:
    """Write a python stub solver and return its registry entry.

    The stub receives the program file path as argv[1] and any forwarded
    options after it.
    """
    script = tmp_path / f"{name}.py"
    script.write_text(textwrap.dedent(body), encoding="utf-8")
    entry = {
        "language": "asp",
        "engine": name,
        "command_template": [sys.executable, str(script), "{file}"],
        "allowed_options": descriptor.pop("allowed_options", []),
    }
    entry.update(descriptor)
    return entry


def registry_with(*entries: dict) -> Registry:
    registry = build_registry(None)
    for entry in entries:
        registry.register(parse_descriptor(entry))
    return registry


def engines_file_with(tmp_path, *entries: dict) -> str:
    path = tmp_path / "engines.json"
    path.write_text(json.dumps(list(entries)), encoding="utf-8")
    return str(path)


def processes_matching(marker: str) -> list[str]:
    """Command lines of live processes containing `marker` (self excluded)."""
    out = []
    for pid in os.listdir("/proc"):
        if not pid.isdigit() or int(pid) == os.getpid():
            continue
        try:
            with open(f"/proc/{pid}/cmdline", "rb") as handle:
                cmd = handle.read().replace(b"\x00", b" ").decode(errors="replace")
        except OSError:
            continue
        if marker in cmd:
            out.append(cmd.strip())
    return out
