from __future__ import annotations

import sys
import time

import pytest

from pesim import Policy, ZoneGrid, default_grid, default_zone_template, sweep


class TimedSweep:
    def __init__(self, grid: ZoneGrid, seconds: float, workers: int) -> None:
        self.grid = grid
        self.seconds = seconds
        self.workers = workers


@pytest.fixture(scope="session")
def default_baseline_sweep() -> TimedSweep:
    """The full default baseline zone sweep, run once per session on 8 workers.

    Shared between the zone-map property tests and the acceptance gate; the
    wall-clock time of the single run is recorded for the runtime criterion.
    """
    template = default_zone_template(Policy.pursuit(1.0), Policy.evasion(1.0, 3.0))
    spec = default_grid(template)
    start = time.perf_counter()
    grid = sweep(spec, workers=8)
    seconds = time.perf_counter() - start
    return TimedSweep(grid, seconds, 8)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Echo the release-gate verdicts, one line per criterion."""
    gate = sys.modules.get("test_acceptance")
    verdicts = getattr(gate, "VERDICTS", None) if gate else None
    if not verdicts:
        return
    terminalreporter.ensure_newline()
    terminalreporter.section("acceptance criteria", sep="-")
    for line in verdicts:
        terminalreporter.write_line(line)
