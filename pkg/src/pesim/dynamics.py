"""Damped point-mass dynamics and single-step time integration.

Each agent is a unit mass on the plane obeying

    x_ddot(t) = -mu * x_dot(t) + a

with a the (bounded) self-propelled acceleration and mu a linear velocity
damping coefficient. Under constant thrust the speed saturates at the
terminal value ``|a| / mu``.

Two step schemes are provided:

* ``EXACT_EXPONENTIAL`` -- closed-form solution of the linear ODE under a
  zero-order hold on the acceleration. Exact for piecewise-constant
  controls, so deterministic studies do not depend on dt beyond the
  strategy-sampling resolution.
* ``SEMI_IMPLICIT_EULER`` -- damped explicit velocity update followed by a
  position update with the *new* velocity. This mirrors the learning
  environment used to train neural policies, so exported policies replay
  under the same discrete dynamics they were trained on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import CoincidentAgentsError, UnstableStepError
from .vec import Vec2

# Below this, the exact scheme switches to its analytic mu -> 0 limit to
# avoid dividing by a vanishing damping coefficient.
MU_ZERO_THRESHOLD = 1e-9


class Scheme(Enum):
    EXACT_EXPONENTIAL = "exact"
    SEMI_IMPLICIT_EULER = "euler"


@dataclass(frozen=True, slots=True)
class WorldParams:
    """Environment constants shared by every step of an episode.

    mu: velocity damping coefficient (1/s), >= 0.
    eps: capture radius (m), > 0.
    dt: integration and strategy-sampling interval (s), > 0.
    t_max: episode horizon (s), >= dt.
    """

    mu: float
    eps: float
    dt: float
    t_max: float
    scheme: Scheme = Scheme.EXACT_EXPONENTIAL

    def __post_init__(self) -> None:
        if self.mu < 0.0:
            raise ValueError(f"mu must be >= 0, got {self.mu}")
        if self.eps <= 0.0:
            raise ValueError(f"eps must be > 0, got {self.eps}")
        if self.dt <= 0.0:
            raise ValueError(f"dt must be > 0, got {self.dt}")
        if self.t_max <= 0.0:
            raise ValueError(f"t_max must be > 0, got {self.t_max}")
        if self.dt > self.t_max:
            raise ValueError(f"dt={self.dt} exceeds t_max={self.t_max}")


@dataclass(frozen=True, slots=True)
class AgentState:
    """Position and velocity of one agent at an instant."""

    pos: Vec2
    vel: Vec2


def unit_vector_to_evader(x_p: Vec2, x_e: Vec2) -> Vec2:
    """Unit vector pointing from the pursuer's position to the evader's.

    Raises CoincidentAgentsError when the positions coincide (capture should
    have ended the episode before any strategy asks for a bearing).
    """
    dx = x_e.x - x_p.x
    dy = x_e.y - x_p.y
    n = math.hypot(dx, dy)
    if n == 0.0:
        raise CoincidentAgentsError(f"agents coincide at ({x_p.x}, {x_p.y})")
    return Vec2(dx / n, dy / n)


def clamp_acceleration(a: Vec2, a_max: float) -> Vec2:
    """Project `a` onto the closed ball of radius `a_max`.

    Vectors already inside the ball are returned unchanged (bit-identical).
    """
    if a_max < 0.0:
        raise ValueError(f"a_max must be >= 0, got {a_max}")
    n = a.norm()
    if n <= a_max:
        return a
    if a_max == 0.0:
        return Vec2(0.0, 0.0)
    return a * (a_max / n)


def step(state: AgentState, accel: Vec2, params: WorldParams) -> AgentState:
    """Advance one agent by a single dt under constant acceleration `accel`."""
    if params.scheme is Scheme.SEMI_IMPLICIT_EULER:
        return _step_euler(state, accel, params.mu, params.dt)
    return _step_exact(state, accel, params.mu, params.dt)


def _step_exact(state: AgentState, accel: Vec2, mu: float, h: float) -> AgentState:
    x, v = state.pos, state.vel
    if mu < MU_ZERO_THRESHOLD:
        # Undamped limit: plain constant-acceleration kinematics.
        v1 = Vec2(v.x + accel.x * h, v.y + accel.y * h)
        x1 = Vec2(
            x.x + v.x * h + 0.5 * accel.x * h * h,
            x.y + v.y * h + 0.5 * accel.y * h * h,
        )
        return AgentState(x1, v1)
    em = math.exp(-mu * h)
    om = -math.expm1(-mu * h)  # 1 - e^(-mu h), accurate for small mu*h
    ax, ay = accel.x / mu, accel.y / mu
    v1 = Vec2(v.x * em + ax * om, v.y * em + ay * om)
    k = om / mu
    x1 = Vec2(x.x + v.x * k + ax * (h - k), x.y + v.y * k + ay * (h - k))
    return AgentState(x1, v1)


def _step_euler(state: AgentState, accel: Vec2, mu: float, h: float) -> AgentState:
    damp = 1.0 - mu * h
    if damp <= 0.0:
        raise UnstableStepError(
            f"mu*dt = {mu * h} >= 1: the damping factor would flip sign"
        )
    x, v = state.pos, state.vel
    v1 = Vec2(v.x * damp + accel.x * h, v.y * damp + accel.y * h)
    x1 = Vec2(x.x + v1.x * h, x.y + v1.y * h)
    return AgentState(x1, v1)


def speed_bound(initial_speed: float, a_max: float, params: WorldParams) -> float:
    """Upper bound on the speed an agent can ever reach during an episode.

    With damping, each step maps the velocity to a convex combination of the
    old velocity and the terminal velocity, so the speed never exceeds
    max(initial, a_max/mu). Without damping it grows at most linearly.
    """
    if params.mu >= MU_ZERO_THRESHOLD:
        return max(initial_speed, a_max / params.mu)
    return initial_speed + a_max * params.t_max
