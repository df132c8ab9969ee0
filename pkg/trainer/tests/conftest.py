from __future__ import annotations

import json
import shutil
import subprocess
import sys
from pathlib import Path

import pytest

ARTIFACTS_DIR = Path(__file__).resolve().parent.parent / "artifacts"


def engine_cli(*args: str) -> subprocess.CompletedProcess:
    exe = shutil.which("pesim")
    if exe is None:
        pytest.fail("engine CLI `pesim` is not installed")
    return subprocess.run([exe, *args], capture_output=True, text=True)


@pytest.fixture(scope="session")
def golden_fixture(tmp_path_factory) -> dict:
    """Parity fixture emitted by the engine, fetched through its CLI."""
    path = tmp_path_factory.mktemp("golden") / "golden.json"
    proc = engine_cli("golden", "--out", str(path))
    assert proc.returncode == 0, proc.stderr
    return json.loads(path.read_text())


@pytest.fixture(scope="session")
def artifacts_dir() -> Path:
    assert ARTIFACTS_DIR.is_dir(), "committed training artifacts are missing"
    return ARTIFACTS_DIR


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Echo the release-gate verdicts, one line per criterion."""
    gate = sys.modules.get("test_artifacts")
    verdicts = getattr(gate, "VERDICTS", None) if gate else None
    if not verdicts:
        return
    terminalreporter.ensure_newline()
    terminalreporter.section("artifact criteria", sep="-")
    for line in verdicts:
        terminalreporter.write_line(line)
