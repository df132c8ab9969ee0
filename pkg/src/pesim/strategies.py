"""Baseline feedback laws and the uniform policy-dispatch interface.

The baseline pursuer always accelerates straight at the evader at full
thrust. The baseline evader flees along the same ray while the pursuer is
far, and switches to a hard perpendicular turn once the separation drops to
the critical distance c, exploiting the pursuer's wider turning radius.

Learned actors plug into the same dispatch: a policy is a tagged value
(baseline pursuit, baseline evasion, or a neural network) plus its
acceleration budget, and `policy_action` maps any of them to a bounded
acceleration command.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .dynamics import clamp_acceleration, unit_vector_to_evader
from .errors import InvalidDirectionError, PolicyMismatchError
from .mlp import MlpNet, forward
from .observation import GameObservation, Perspective, build_observation
from .vec import Vec2

# Tolerances for the perpendicular-turn sign rule: velocities below
# _VEL_TIE are treated as "no momentum to oppose", and dot products closer
# than _DOT_TIE are treated as equal. Both ties break counterclockwise.
_VEL_TIE = 1e-9
_DOT_TIE = 1e-12


class PolicyKind(Enum):
    BASELINE_PURSUIT = "baseline_pursuit"
    BASELINE_EVASION = "baseline_evasion"
    MLP = "mlp"


@dataclass(frozen=True, slots=True)
class Policy:
    """One agent's decision rule plus its acceleration budget.

    `c` is the baseline evader's critical turning distance and must be given
    exactly when kind is BASELINE_EVASION; `net` must be given exactly when
    kind is MLP.
    """

    kind: PolicyKind
    a_max: float
    c: float | None = None
    net: MlpNet | None = None

    def __post_init__(self) -> None:
        if not math.isfinite(self.a_max) or self.a_max < 0.0:
            raise ValueError(f"a_max must be a finite real >= 0, got {self.a_max}")
        if self.kind is PolicyKind.BASELINE_EVASION:
            if self.c is None or not math.isfinite(self.c) or self.c < 0.0:
                raise ValueError(
                    f"baseline evasion needs a critical distance c >= 0, got {self.c}"
                )
        elif self.c is not None:
            raise ValueError(f"c is only meaningful for baseline evasion, got {self.c}")
        if self.kind is PolicyKind.MLP:
            if self.net is None:
                raise ValueError("mlp policy needs a network")
        elif self.net is not None:
            raise ValueError("net is only meaningful for mlp policies")

    @classmethod
    def pursuit(cls, a_max: float) -> Policy:
        return cls(PolicyKind.BASELINE_PURSUIT, a_max)

    @classmethod
    def evasion(cls, a_max: float, c: float) -> Policy:
        return cls(PolicyKind.BASELINE_EVASION, a_max, c=c)

    @classmethod
    def from_net(cls, net: MlpNet) -> Policy:
        return cls(PolicyKind.MLP, net.a_max, net=net)


def baseline_pursuit(obs: GameObservation, a_p: float) -> Vec2:
    """Full-thrust bearing pursuit: a_p times the unit vector to the evader."""
    if a_p < 0.0:
        raise ValueError(f"a_p must be >= 0, got {a_p}")
    d = unit_vector_to_evader(obs.x_p, obs.x_e)
    return d * a_p


def perpendicular_turn(d: Vec2, pursuer_vel: Vec2) -> Vec2:
    """Unit vector orthogonal to `d`, chosen against the pursuer's momentum.

    Of the two perpendiculars n+ = (-d.y, d.x) and n- = (d.y, -d.x), returns
    the one with the smaller dot product against `pursuer_vel`, so the turn
    exploits the pursuer's wider turning radius. Ties (and a pursuer at
    rest) resolve to n+, the counterclockwise choice.
    """
    if abs(d.norm() - 1.0) > 1e-9:
        raise InvalidDirectionError(f"expected a unit direction, got norm {d.norm()}")
    n_plus = Vec2(-d.y, d.x)
    if pursuer_vel.norm() < _VEL_TIE:
        return n_plus
    dp = n_plus.dot(pursuer_vel)
    # The two candidate dot products are +dp and -dp.
    if abs(2.0 * dp) <= _DOT_TIE:
        return n_plus
    return n_plus if dp < 0.0 else Vec2(d.y, -d.x)


def baseline_evasion(obs: GameObservation, a_e: float, c: float) -> Vec2:
    """Flee straight away while separation exceeds c, else turn hard.

    The branch condition is re-evaluated every call; the turn is not latched.
    Separation exactly equal to c already triggers the turn.
    """
    if a_e < 0.0:
        raise ValueError(f"a_e must be >= 0, got {a_e}")
    if c < 0.0:
        raise ValueError(f"c must be >= 0, got {c}")
    d = unit_vector_to_evader(obs.x_p, obs.x_e)
    separation = (obs.x_p - obs.x_e).norm()
    if separation > c:
        return d * a_e
    return perpendicular_turn(d, obs.v_p) * a_e


def policy_action(policy: Policy, obs: GameObservation, who: Perspective) -> Vec2:
    """Evaluate `policy` from one agent's perspective and clamp the result.

    Baseline laws are role-specific: using the pursuit law for the evader or
    the evasion law for the pursuer raises PolicyMismatchError. Network
    policies serve either role; the perspective only selects the observation
    layout.
    """
    if policy.kind is PolicyKind.BASELINE_PURSUIT:
        if who is not Perspective.PURSUER:
            raise PolicyMismatchError("baseline pursuit cannot act for the evader")
        raw = baseline_pursuit(obs, policy.a_max)
    elif policy.kind is PolicyKind.BASELINE_EVASION:
        if who is not Perspective.EVADER:
            raise PolicyMismatchError("baseline evasion cannot act for the pursuer")
        assert policy.c is not None
        raw = baseline_evasion(obs, policy.a_max, policy.c)
    else:
        assert policy.net is not None
        raw = forward(policy.net, build_observation(obs, who))
    return clamp_acceleration(raw, policy.a_max)
