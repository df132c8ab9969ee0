"""Shared view of the game state and the flat vector fed to neural policies.

Both agents observe the full state (positions and velocities of both
players). Neural policies consume it flattened into a fixed 8-slot layout,
each agent from its own perspective:

    [own_vel.x, own_vel.y, own_pos.x, own_pos.y,
     other_rel_pos.x, other_rel_pos.y, other_vel.x, other_vel.y]

Positions are absolute world coordinates except the opponent's, which is
relative to the observer. The layout is tagged by name in exported weight
files so a replay refuses weights trained against a different convention.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .vec import Vec2

OBS_DIM = 8
OBS_LAYOUT = "vel2_pos2_relpos2_othervel2"


class Perspective(Enum):
    PURSUER = "pursuer"
    EVADER = "evader"


@dataclass(frozen=True, slots=True)
class GameObservation:
    """Positions and velocities of both agents at a sampling instant."""

    x_p: Vec2
    x_e: Vec2
    v_p: Vec2
    v_e: Vec2


def build_observation(obs: GameObservation, who: Perspective) -> tuple[float, ...]:
    """Flatten `obs` into the 8-slot layout from one agent's perspective."""
    if who is Perspective.PURSUER:
        own_pos, own_vel = obs.x_p, obs.v_p
        other_pos, other_vel = obs.x_e, obs.v_e
    else:
        own_pos, own_vel = obs.x_e, obs.v_e
        other_pos, other_vel = obs.x_p, obs.v_p
    return (
        own_vel.x,
        own_vel.y,
        own_pos.x,
        own_pos.y,
        other_pos.x - own_pos.x,
        other_pos.y - own_pos.y,
        other_vel.x,
        other_vel.y,
    )
