"""Workspace composition and import/export.

Pure functions shared by the CLI and UI: turning tab selections plus
settings into a run request, and round-tripping workspaces through the
on-disk JSON format defined in `loide.protocol`.
"""

from __future__ import annotations

import json
from typing import Union

from .protocol import (
    ProblemReport,
    RunRequest,
    Workspace,
    malformed,
    validate_workspace,
    workspace_to_doc,
)


def compose_request(ws: Workspace) -> RunRequest:
    """Build the run request for a workspace: sources are the texts of the
    run-selected tabs, in tab order; language, engine, and options come
    from the settings."""
    return RunRequest(
        language=ws.settings.language,
        engine=ws.settings.engine,
        options=tuple(ws.settings.options),
        sources=tuple(tab.text for tab in ws.tabs if tab.run_selected),
    )


def export_workspace(ws: Workspace) -> bytes:
    """Serialize a workspace to its canonical JSON file form."""
    return json.dumps(
        workspace_to_doc(ws), separators=(",", ":"), ensure_ascii=False
    ).encode("utf-8")


def import_workspace(data: Union[bytes, str]) -> Union[Workspace, ProblemReport]:
    """Parse and validate an exported workspace file."""
    try:
        if isinstance(data, (bytes, bytearray)):
            data = bytes(data).decode("utf-8")
        doc = json.loads(data)
    except UnicodeDecodeError:
        return malformed("workspace file is not valid UTF-8")
    except json.JSONDecodeError as exc:
        return malformed(f"workspace file is not valid JSON: {exc.msg}")
    return validate_workspace(doc)
