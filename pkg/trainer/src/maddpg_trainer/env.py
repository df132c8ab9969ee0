"""Training environment.

The dynamics are the engine's semi-implicit Euler update, reproduced
operation for operation so the two implementations agree to within the
golden-fixture tolerance: v' = v(1 - mu h) + a h, then x' = x + v' h.
Rewards are the zero-sum separation reward with the capture discontinuity.
The arena is unbounded; any boundary shaping is the training loop's
business, not the environment's.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EnvironmentFault

OBS_DIM = 8
ACT_DIM = 2

CAPTURE_PENALTY = 10.0
SEPARATION_REWARD_GAIN = 0.1


def euler_step(
    pos: tuple[float, float],
    vel: tuple[float, float],
    acc: tuple[float, float],
    mu: float,
    dt: float,
) -> tuple[tuple[float, float], tuple[float, float]]:
    """One semi-implicit Euler step; requires mu*dt < 1."""
    damp = 1.0 - mu * dt
    vx = vel[0] * damp + acc[0] * dt
    vy = vel[1] * damp + acc[1] * dt
    return (pos[0] + vx * dt, pos[1] + vy * dt), (vx, vy)


def clamp_to_ball(a: tuple[float, float], a_max: float) -> tuple[float, float]:
    norm = math.hypot(a[0], a[1])
    if norm <= a_max:
        return a
    if a_max == 0.0:
        return (0.0, 0.0)
    scale = a_max / norm
    return (a[0] * scale, a[1] * scale)


def game_reward(sep: float, eps: float) -> tuple[float, float]:
    """Return (r_p, r_e); exact zero sum in both regimes."""
    if sep > eps:
        r_e = SEPARATION_REWARD_GAIN * sep
        return -r_e, r_e
    return CAPTURE_PENALTY, -CAPTURE_PENALTY


@dataclass(frozen=True, slots=True)
class StepResult:
    obs_p: np.ndarray
    obs_e: np.ndarray
    r_p: float
    r_e: float
    done: bool
    captured: bool


class PursuitEvasionEnv:
    """Sequential two-agent game with simultaneous moves.

    Observation slots, identical for both agents and to the engine:
    [own_vel, own_pos, other_pos - own_pos, other_vel], two floats each.
    """

    def __init__(
        self,
        mu: float,
        eps: float,
        dt: float,
        episode_len_steps: int,
        a_p_max: float,
        a_e_max: float,
    ) -> None:
        if mu * dt >= 1.0:
            raise ValueError(f"mu*dt = {mu * dt} >= 1 is unstable")
        self.mu = mu
        self.eps = eps
        self.dt = dt
        self.episode_len_steps = episode_len_steps
        self.a_p_max = a_p_max
        self.a_e_max = a_e_max
        self._x_p = (0.0, 0.0)
        self._x_e = (0.0, 0.0)
        self._v_p = (0.0, 0.0)
        self._v_e = (0.0, 0.0)
        self._step_count = 0

    def reset(
        self,
        x_p0: tuple[float, float],
        x_e0: tuple[float, float],
    ) -> tuple[np.ndarray, np.ndarray]:
        sep = math.dist(x_p0, x_e0)
        if sep <= self.eps:
            raise ValueError(f"initial separation {sep} <= eps {self.eps}")
        self._x_p = (float(x_p0[0]), float(x_p0[1]))
        self._x_e = (float(x_e0[0]), float(x_e0[1]))
        self._v_p = (0.0, 0.0)
        self._v_e = (0.0, 0.0)
        self._step_count = 0
        return self._observe_p(), self._observe_e()

    @property
    def positions(self) -> tuple[tuple[float, float], tuple[float, float]]:
        return self._x_p, self._x_e

    def separation(self) -> float:
        return math.dist(self._x_p, self._x_e)

    def step(self, a_p: tuple[float, float], a_e: tuple[float, float]) -> StepResult:
        for name, action in (("pursuer", a_p), ("evader", a_e)):
            if not (math.isfinite(action[0]) and math.isfinite(action[1])):
                raise EnvironmentFault(f"non-finite {name} action {action}")
        a_p = clamp_to_ball((float(a_p[0]), float(a_p[1])), self.a_p_max)
        a_e = clamp_to_ball((float(a_e[0]), float(a_e[1])), self.a_e_max)

        self._x_p, self._v_p = euler_step(self._x_p, self._v_p, a_p, self.mu, self.dt)
        self._x_e, self._v_e = euler_step(self._x_e, self._v_e, a_e, self.mu, self.dt)
        self._step_count += 1

        sep = self.separation()
        r_p, r_e = game_reward(sep, self.eps)
        captured = sep <= self.eps
        done = captured or self._step_count >= self.episode_len_steps
        return StepResult(self._observe_p(), self._observe_e(), r_p, r_e, done, captured)

    def _observe_p(self) -> np.ndarray:
        return self._observe(self._x_p, self._v_p, self._x_e, self._v_e)

    def _observe_e(self) -> np.ndarray:
        return self._observe(self._x_e, self._v_e, self._x_p, self._v_p)

    @staticmethod
    def _observe(
        own_pos: tuple[float, float],
        own_vel: tuple[float, float],
        other_pos: tuple[float, float],
        other_vel: tuple[float, float],
    ) -> np.ndarray:
        return np.array(
            [
                own_vel[0],
                own_vel[1],
                own_pos[0],
                own_pos[1],
                other_pos[0] - own_pos[0],
                other_pos[1] - own_pos[1],
                other_vel[0],
                other_vel[1],
            ],
            dtype=np.float64,
        )
