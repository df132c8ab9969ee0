"""Release gate for the committed training artifacts.

Validates the shipped weight files and reward curves by replaying them
through the engine's CLI: qualitative single-game outcomes, the survival
ordering, convergence of the reward curves, and the learned-vs-learned
zone map against the baseline one. Each criterion records a
``[PASS]``/``[FAIL]`` line that the terminal summary echoes.
"""

from __future__ import annotations

import csv
import json
import re
from pathlib import Path

import numpy as np
import pytest

from maddpg_trainer import euler_step, forward_doc, plateaued, read_reward_csv

from conftest import engine_cli

HORIZON = 20.0

VERDICTS: list[str] = []


class _criterion:
    def __init__(self, name: str) -> None:
        self.name = name

    def __enter__(self) -> "_criterion":
        return self

    def __exit__(self, exc_type, exc, tb) -> bool:
        verdict = "PASS" if exc_type is None else "FAIL"
        line = f"[{verdict}] {self.name}"
        VERDICTS.append(line)
        print(line)
        return False


def simulate(*args: str) -> tuple[str, float]:
    """Run one engine game; return (outcome, survival time in seconds)."""
    proc = engine_cli("simulate", *args)
    assert proc.returncode == 0, proc.stderr
    out = proc.stdout.strip()
    if out.startswith("captured"):
        return "captured", float(out.split("t=")[1])
    assert out == "escaped"
    return "escaped", HORIZON


def read_zone_cells(path: Path) -> list[tuple[float, float, str]]:
    with open(path, newline="") as handle:
        reader = csv.DictReader(handle)
        return [
            (float(row["ae"]), float(row["ap"]), row["outcome"]) for row in reader
        ]


def nontrivial_escape_cells(cells: list[tuple[float, float, str]]) -> int:
    return sum(1 for ae, ap, outcome in cells if ap > ae and outcome == "escaped")


def parse_slope(stdout: str) -> float:
    match = re.search(r"^slope: (\S+)$", stdout, re.MULTILINE)
    assert match, f"no slope in output: {stdout!r}"
    return float(match.group(1))


@pytest.fixture(scope="module")
def case1(artifacts_dir) -> Path:
    return artifacts_dir / "case1"

@pytest.fixture(scope="module")
def case2(artifacts_dir) -> Path:
    return artifacts_dir / "case2"


def test_environment_parity(golden_fixture):
    with _criterion("environment parity (32 golden step vectors, 1e-6)"):
        tolerance = golden_fixture["step_tolerance"]
        for case in golden_fixture["step_cases"]:
            x, v = euler_step(
                tuple(case["x"]),
                tuple(case["v"]),
                tuple(case["a"]),
                golden_fixture["mu"],
                golden_fixture["dt"],
            )
            for got, want in zip((*x, *v), (*case["x_next"], *case["v_next"])):
                assert abs(got - want) <= tolerance


def test_exported_actor_forward_parity(golden_fixture, case1, case2):
    with _criterion("exported actor forward parity on fixture observations (1e-5)"):
        rng = np.random.default_rng(20)
        observations = [np.asarray(c["obs"], dtype=np.float64) for c in golden_fixture["mlp_cases"]]
        for directory in (case1, case2):
            for name in ("pursuer.json", "evader.json"):
                doc = json.loads((directory / name).read_text())
                for obs in observations:
                    out = forward_doc(doc, obs)
                    # the doc is the interchange format; its forward must be
                    # finite and inside the budget ball on every fixture obs
                    assert np.isfinite(out).all()
                    assert float(np.hypot(*out)) <= doc["a_max"] + 1e-9
        # and the fixture's own pinned nets reproduce their pinned outputs
        for case in golden_fixture["mlp_cases"]:
            out = forward_doc(case["net"], np.asarray(case["obs"], dtype=np.float64))
            assert out == pytest.approx(case["out"], abs=golden_fixture["forward_tolerance"])


def test_training_convergence(case2):
    with _criterion("training convergence (plateau within 5000 episodes)"):
        log = read_reward_csv(case2 / "rewards.csv")
        assert log.episodes <= 5000
        assert plateaued(log.avg_r_p), "pursuer curve still trending"
        assert plateaued(log.avg_r_e), "evader curve still trending"


def test_learned_evader_escapes_baseline_pursuer(case1):
    with _criterion("case-1 learned evader vs baseline pursuer: escaped"):
        outcome, _ = simulate(
            "--ap", "4", "--evader", f"mlp:{case1 / 'evader.json'}",
            "--xp0", "0,-4", "--xe0", "0,0", "--out", "/tmp/replay_a.csv",
        )
        assert outcome == "escaped"


def test_learned_pursuer_captures_baseline_evader(case2):
    with _criterion("case-2 learned pursuer vs baseline evader: captured"):
        outcome, _ = simulate(
            "--pursuer", f"mlp:{case2 / 'pursuer.json'}", "--ae", "2.4", "--c", "2.4",
            "--xp0", "0,-4", "--xe0", "0,0", "--out", "/tmp/replay_b.csv",
        )
        assert outcome == "captured"


def test_learned_vs_learned_capture_and_survival_ordering(case2):
    with _criterion("case-2 learned vs learned: captured, evader outlasts baseline"):
        _, baseline_survival = simulate(
            "--pursuer", f"mlp:{case2 / 'pursuer.json'}", "--ae", "2.4", "--c", "2.4",
            "--xp0", "0,-4", "--xe0", "0,0", "--out", "/tmp/replay_b2.csv",
        )
        outcome, learned_survival = simulate(
            "--pursuer", f"mlp:{case2 / 'pursuer.json'}",
            "--evader", f"mlp:{case2 / 'evader.json'}",
            "--xp0", "0,-4", "--xe0", "0,0", "--out", "/tmp/replay_c.csv",
        )
        assert outcome == "captured"
        assert learned_survival > baseline_survival


def test_learned_zone_map_shrinks_escape_region(case2, tmp_path_factory):
    with _criterion("learned sweep: smaller slope and smaller escape area"):
        out = tmp_path_factory.mktemp("zones")
        baseline = engine_cli(
            "sweep", "--workers", "8", "--out", str(out / "baseline.csv")
        )
        assert baseline.returncode == 0, baseline.stderr
        learned = engine_cli(
            "sweep", "--workers", "8",
            "--pursuer", f"mlp:{case2 / 'pursuer.json'}",
            "--evader", f"mlp:{case2 / 'evader.json'}",
            "--out", str(out / "learned.csv"),
        )
        assert learned.returncode == 0, learned.stderr

        baseline_slope = parse_slope(baseline.stdout)
        learned_slope = parse_slope(learned.stdout)
        assert learned_slope < baseline_slope

        baseline_escapes = nontrivial_escape_cells(
            read_zone_cells(out / "baseline.csv")
        )
        learned_escapes = nontrivial_escape_cells(read_zone_cells(out / "learned.csv"))
        assert 0 < learned_escapes < baseline_escapes
