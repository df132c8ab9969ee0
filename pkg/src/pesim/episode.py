"""Single-game rollout: sample strategies, step the dynamics, detect capture.

One episode alternates strategy sampling and integration on a fixed dt grid.
Both agents act on the same pre-step observation (simultaneous play), both
are stepped, the post-step state is logged together with the commands that
produced it, and capture is tested. The episode ends at the first instant
the separation falls within the capture radius, or at the horizon.

Rewards are zero-sum: while separated, the evader earns 0.1 times the
separation per sample and the pursuer the negation; the capture instant
swaps a terminal -10 / +10.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, TextIO

from .dynamics import AgentState, WorldParams, speed_bound, step
from .observation import GameObservation, Perspective
from .strategies import Policy, policy_action
from .vec import Vec2

CAPTURE_PENALTY = 10.0
SEPARATION_REWARD_GAIN = 0.1

TRAJECTORY_CSV_HEADER = (
    "t,xp_x,xp_y,xe_x,xe_y,vp_x,vp_y,ve_x,ve_y,ap_x,ap_y,ae_x,ae_y,r_e"
)


class Outcome(Enum):
    CAPTURED = "captured"
    ESCAPED = "escaped"


@dataclass(frozen=True, slots=True)
class EpisodeConfig:
    """Everything needed to reproduce one game bit-for-bit.

    The seed is recorded for forward compatibility with stochastic policies;
    every policy shipped here is deterministic.
    """

    world: WorldParams
    pursuer: Policy
    evader: Policy
    x_p0: Vec2
    x_e0: Vec2
    v_p0: Vec2 = Vec2(0.0, 0.0)
    v_e0: Vec2 = Vec2(0.0, 0.0)
    seed: int = 0

    def __post_init__(self) -> None:
        if (self.x_p0 - self.x_e0).norm() <= self.world.eps:
            raise ValueError(
                "initial separation must exceed the capture radius "
                f"(got {(self.x_p0 - self.x_e0).norm()} <= {self.world.eps})"
            )


@dataclass(frozen=True, slots=True)
class TrajectoryRow:
    """Post-step state at time t plus the commands that produced it."""

    t: float
    x_p: Vec2
    x_e: Vec2
    v_p: Vec2
    v_e: Vec2
    a_p_cmd: Vec2
    a_e_cmd: Vec2
    r_e: float


@dataclass(frozen=True, slots=True)
class EpisodeResult:
    outcome: Outcome
    capture_time: float | None
    steps: int
    trajectory: tuple[TrajectoryRow, ...]
    cumulative_r_e: float

    @property
    def final(self) -> TrajectoryRow:
        return self.trajectory[-1]


def reward(x_p: Vec2, x_e: Vec2, eps: float) -> tuple[float, float]:
    """Per-sample zero-sum reward (r_e, r_p) for the given positions."""
    if eps <= 0.0:
        raise ValueError(f"eps must be > 0, got {eps}")
    separation = (x_p - x_e).norm()
    if separation > eps:
        r_e = SEPARATION_REWARD_GAIN * separation
        return r_e, -r_e
    return -CAPTURE_PENALTY, CAPTURE_PENALTY


def is_captured(x_p: Vec2, x_e: Vec2, eps: float) -> bool:
    """True iff the separation is within the capture radius (inclusive)."""
    if eps <= 0.0:
        raise ValueError(f"eps must be > 0, got {eps}")
    return (x_p - x_e).norm() <= eps


def episode_steps(world: WorldParams) -> int:
    """Number of dt steps needed to reach the horizon.

    The small slack keeps an exact-multiple horizon (t_max = n * dt up to
    rounding) from gaining a spurious extra step.
    """
    return math.ceil(world.t_max / world.dt - 1e-9)


def _check_tunneling(config: EpisodeConfig) -> None:
    # Capture is tested only on the dt grid, so per-step displacement must
    # stay well under the capture radius or a fast agent could pass through.
    world = config.world
    bound = max(
        speed_bound(config.v_p0.norm(), config.pursuer.a_max, world),
        speed_bound(config.v_e0.norm(), config.evader.a_max, world),
    )
    if bound * world.dt >= world.eps / 2.0:
        raise ValueError(
            f"dt={world.dt} too coarse for reliable capture detection: "
            f"speed bound {bound} m/s covers {bound * world.dt} m per step, "
            f"which is not below eps/2 = {world.eps / 2.0} m"
        )


def run_episode(config: EpisodeConfig) -> EpisodeResult:
    """Roll out one game and return its full logged trajectory.

    Deterministic: identical configs produce bit-identical results. Capture
    is checked after every step, and the first capturing step ends the
    episode with capture_time = step index * dt.
    """
    _check_tunneling(config)
    world = config.world
    pursuer = AgentState(config.x_p0, config.v_p0)
    evader = AgentState(config.x_e0, config.v_e0)
    n_steps = episode_steps(world)

    rows: list[TrajectoryRow] = []
    outcome = Outcome.ESCAPED
    capture_time: float | None = None
    for k in range(1, n_steps + 1):
        obs = GameObservation(pursuer.pos, evader.pos, pursuer.vel, evader.vel)
        a_p = policy_action(config.pursuer, obs, Perspective.PURSUER)
        a_e = policy_action(config.evader, obs, Perspective.EVADER)
        pursuer = step(pursuer, a_p, world)
        evader = step(evader, a_e, world)
        t = k * world.dt
        r_e, _ = reward(pursuer.pos, evader.pos, world.eps)
        rows.append(
            TrajectoryRow(t, pursuer.pos, evader.pos, pursuer.vel, evader.vel, a_p, a_e, r_e)
        )
        if is_captured(pursuer.pos, evader.pos, world.eps):
            outcome = Outcome.CAPTURED
            capture_time = t
            break

    return EpisodeResult(
        outcome=outcome,
        capture_time=capture_time,
        steps=len(rows),
        trajectory=tuple(rows),
        cumulative_r_e=math.fsum(row.r_e for row in rows),
    )


def _fmt(x: float) -> str:
    return f"{x:.9g}"


def trajectory_csv_rows(result: EpisodeResult) -> Iterable[str]:
    yield TRAJECTORY_CSV_HEADER
    for r in result.trajectory:
        fields = (
            r.t,
            r.x_p.x, r.x_p.y, r.x_e.x, r.x_e.y,
            r.v_p.x, r.v_p.y, r.v_e.x, r.v_e.y,
            r.a_p_cmd.x, r.a_p_cmd.y, r.a_e_cmd.x, r.a_e_cmd.y,
            r.r_e,
        )
        yield ",".join(_fmt(f) for f in fields)


def write_trajectory_csv(result: EpisodeResult, out: TextIO) -> None:
    for line in trajectory_csv_rows(result):
        out.write(line)
        out.write("\n")
