"""loide: a web IDE platform for logic programming.

Components: a wire protocol (`loide.protocol`), a public gateway
service (`loide.gateway`), a solver executor service
(`loide.executor`), a built-in ASP engine (`loide.asp`), workspace
composition helpers (`loide.workspace`), and a headless CLI
(`loide.cli`).
"""

__version__ = "0.1.0"
