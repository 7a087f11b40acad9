"""Environment variables and address parsing shared by the services.

Command-line flags win over environment variables, which win over the
defaults listed here.
"""

from __future__ import annotations

import os

ENV_BIND = "LOIDE_BIND"
ENV_EXECUTOR_URL = "LOIDE_EXECUTOR_URL"
ENV_EXECUTOR_BIND = "LOIDE_EXECUTOR_BIND"
ENV_ENGINES_FILE = "LOIDE_ENGINES_FILE"
ENV_STATIC_DIR = "LOIDE_STATIC_DIR"

DEFAULT_GATEWAY_BIND = "0.0.0.0:8084"
DEFAULT_EXECUTOR_BIND = "0.0.0.0:8085"

WS_PATH = "/ws"


def parse_bind(value: str) -> tuple[str, int]:
    """Split "host:port" into its parts; raises ValueError on junk."""
    host, sep, port_text = value.rpartition(":")
    if not sep or not host:
        raise ValueError(f"bind address {value!r} must look like host:port")
    try:
        port = int(port_text)
    except ValueError:
        raise ValueError(f"bind address {value!r} has a non-numeric port")
    if not 0 <= port <= 65535:
        raise ValueError(f"bind address {value!r} has an out-of-range port")
    return host, port


def ws_url_for_bind(bind: str) -> str:
    """The URL a local client should dial for a service bound at `bind`."""
    host, port = parse_bind(bind)
    if host in ("0.0.0.0", "::", ""):
        host = "127.0.0.1"
    return f"ws://{host}:{port}{WS_PATH}"


def env_or(name: str, fallback: str) -> str:
    value = os.environ.get(name, "").strip()
    return value or fallback
