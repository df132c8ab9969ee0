"""Training configuration.

The defaults are the canonical MADDPG reference settings plus the game
geometry shared with the engine: mu=0.5, eps=0.5, episodes of 200 steps at
dt=0.1 (a 20 s horizon). `noise_sigma` is relative to each agent's
acceleration budget so exploration scales with the action range.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass


@dataclass(frozen=True, slots=True)
class TrainConfig:
    a_p_max: float
    a_e_max: float
    episodes: int
    mu: float = 0.5
    eps: float = 0.5
    dt: float = 0.1
    episode_len_steps: int = 200
    gamma: float = 0.95
    tau: float = 0.01
    actor_lr: float = 0.01
    critic_lr: float = 0.01
    batch_size: int = 1024
    replay_capacity: int = 1_000_000
    update_interval: int = 100
    noise_sigma: float = 0.3
    noise_decay: float = 0.9995
    boundary_penalty_coeff: float = 0.1
    # Pursuer spawn ring around the evader; one policy pair then covers
    # every start distance the evaluation settings use.
    spawn_radius_min: float = 3.0
    spawn_radius_max: float = 12.0
    # Probability that an episode's pursuer plays the scripted full-thrust
    # chase law instead of its actor (exploration noise still applies).
    # Self-play alone stops producing tail-chase geometry once the learned
    # pursuer starts leading the target, and an evader evaluated against
    # the scripted pursuer needs that part of the state space in its
    # replay data. Zero keeps rollouts byte-identical to earlier runs.
    scripted_pursuer_mix: float = 0.0
    seed: int = 0

    def __post_init__(self) -> None:
        finite_fields = (
            ("a_p_max", self.a_p_max),
            ("a_e_max", self.a_e_max),
            ("mu", self.mu),
            ("eps", self.eps),
            ("dt", self.dt),
            ("gamma", self.gamma),
            ("tau", self.tau),
            ("actor_lr", self.actor_lr),
            ("critic_lr", self.critic_lr),
            ("noise_sigma", self.noise_sigma),
            ("noise_decay", self.noise_decay),
            ("boundary_penalty_coeff", self.boundary_penalty_coeff),
            ("spawn_radius_min", self.spawn_radius_min),
            ("spawn_radius_max", self.spawn_radius_max),
            ("scripted_pursuer_mix", self.scripted_pursuer_mix),
        )
        for name, value in finite_fields:
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value}")
        if self.a_p_max < 0 or self.a_e_max < 0:
            raise ValueError("acceleration budgets must be >= 0")
        if self.episodes < 0:
            raise ValueError(f"episodes must be >= 0, got {self.episodes}")
        if self.mu < 0:
            raise ValueError(f"mu must be >= 0, got {self.mu}")
        if self.eps <= 0 or self.dt <= 0:
            raise ValueError("eps and dt must be > 0")
        if self.mu * self.dt >= 1.0:
            raise ValueError(
                f"mu*dt = {self.mu * self.dt} >= 1 makes the integrator unstable"
            )
        if self.episode_len_steps < 1:
            raise ValueError("episode_len_steps must be >= 1")
        if not 0.0 < self.gamma < 1.0:
            raise ValueError(f"gamma must be in (0, 1), got {self.gamma}")
        if not 0.0 < self.tau <= 1.0:
            raise ValueError(f"tau must be in (0, 1], got {self.tau}")
        if self.actor_lr <= 0 or self.critic_lr <= 0:
            raise ValueError("learning rates must be > 0")
        if self.batch_size < 1 or self.replay_capacity < self.batch_size:
            raise ValueError("need 1 <= batch_size <= replay_capacity")
        if self.update_interval < 1:
            raise ValueError("update_interval must be >= 1")
        if self.noise_sigma < 0:
            raise ValueError("noise_sigma must be >= 0")
        if not 0.0 < self.noise_decay <= 1.0:
            raise ValueError(f"noise_decay must be in (0, 1], got {self.noise_decay}")
        if self.boundary_penalty_coeff < 0:
            raise ValueError("boundary_penalty_coeff must be >= 0")
        if not 0.0 <= self.scripted_pursuer_mix <= 1.0:
            raise ValueError(
                f"scripted_pursuer_mix must be in [0, 1], got {self.scripted_pursuer_mix}"
            )
        if not 0.0 < self.spawn_radius_min <= self.spawn_radius_max:
            raise ValueError("need 0 < spawn_radius_min <= spawn_radius_max")
        if self.spawn_radius_min <= self.eps:
            raise ValueError("spawn ring must start outside the capture radius")

    @property
    def horizon_seconds(self) -> float:
        return self.episode_len_steps * self.dt

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2)

    @classmethod
    def from_json(cls, text: str) -> "TrainConfig":
        return cls(**json.loads(text))
