"""The inspect command: answer developer queries with index-derived context.

Single-shot by design: each invocation assembles one prompt from the
requested files plus their indexed constructs and returns the backend's
answer (or exports the prompt for a manual chat session).
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path

from .gateway import BackendConfig, complete
from .indexer import ConstructMap
from .prompts import AssembledPrompt, assemble_inspect_prompt, export_json


@dataclass
class InspectionRequest:
    files: list[Path]
    query: str
    cfg: BackendConfig

    def __post_init__(self) -> None:
        if not self.files:
            raise ValueError("inspection needs at least one file")
        if not self.query.strip():
            raise ValueError("inspection needs a non-empty query")


def build_inspect_prompt(
    req: InspectionRequest, cmap: ConstructMap, root: Path
) -> AssembledPrompt:
    """Read the files and label them with root-relative paths for context lookup."""
    labeled = []
    for file in req.files:
        label = Path(os.path.relpath(file, root)).as_posix()
        labeled.append((label, Path(file).read_text(encoding="utf-8", errors="replace")))
    return assemble_inspect_prompt(req.query, labeled, cmap)


def inspect(
    req: InspectionRequest,
    cmap: ConstructMap,
    root: Path,
    export_to: Path | None = None,
) -> str:
    """Answer the query; with export_to set, write the prompt JSON instead."""
    prompt = build_inspect_prompt(req, cmap, root)
    if export_to is not None:
        path = export_json(prompt, export_to)
        return f"prompt written to {path}"
    response = complete(prompt, req.cfg)
    return response.text
