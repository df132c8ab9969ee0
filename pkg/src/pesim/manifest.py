"""Run manifests: every command output gets a sibling reproducibility record.

A manifest captures the fully resolved parameters (after defaulting), the
tool version, hashes of any input weight files, the produced output paths,
and the wall-clock duration. Re-running the recorded command with the
recorded parameters regenerates the outputs bit-identically.
"""

from __future__ import annotations

import hashlib
import json
from importlib import metadata
from pathlib import Path


def tool_version() -> str:
    try:
        return metadata.version("pesim")
    except metadata.PackageNotFoundError:  # running from a source tree
        return "unknown"


def file_sha256(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def build_manifest(
    command: str,
    parameters: dict,
    outputs: list[str],
    duration_seconds: float,
    inputs: dict[str, str] | None = None,
) -> dict:
    """Assemble the manifest document.

    `inputs` maps a parameter name to a file path; each is recorded with its
    content hash so a replay can verify it feeds the same bytes.
    """
    doc = {
        "tool": "pesim",
        "version": tool_version(),
        "command": command,
        "parameters": parameters,
        "outputs": outputs,
        "duration_seconds": round(duration_seconds, 3),
    }
    if inputs:
        doc["inputs"] = {
            name: {"path": str(path), "sha256": file_sha256(path)}
            for name, path in inputs.items()
        }
    return doc


def manifest_path(primary_output: str | Path) -> Path:
    return Path(str(primary_output) + ".manifest.json")


def write_manifest(primary_output: str | Path, doc: dict) -> Path:
    path = manifest_path(primary_output)
    path.write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    return path
