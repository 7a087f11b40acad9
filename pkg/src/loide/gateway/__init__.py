"""Public gateway: client WebSocket sessions, run relay, static UI."""

from .link import ExecutorLink, LinkDown, LinkState
from .server import GatewayConfig, GatewayServer, SessionState, default_static_dir

__all__ = [
    "ExecutorLink",
    "GatewayConfig",
    "GatewayServer",
    "LinkDown",
    "LinkState",
    "SessionState",
    "default_static_dir",
]
