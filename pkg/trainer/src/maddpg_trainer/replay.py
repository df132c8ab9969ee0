"""Uniform-sampling ring replay buffer for the two-agent game."""

from __future__ import annotations

import numpy as np

from .env import ACT_DIM, OBS_DIM


class ReplayBuffer:
    """Preallocated circular storage; float32 throughout."""

    def __init__(self, capacity: int, rng: np.random.Generator) -> None:
        if capacity < 1:
            raise ValueError(f"capacity must be >= 1, got {capacity}")
        self.capacity = capacity
        self._rng = rng
        self._next = 0
        self._size = 0
        self.obs_p = np.zeros((capacity, OBS_DIM), dtype=np.float32)
        self.obs_e = np.zeros((capacity, OBS_DIM), dtype=np.float32)
        self.act_p = np.zeros((capacity, ACT_DIM), dtype=np.float32)
        self.act_e = np.zeros((capacity, ACT_DIM), dtype=np.float32)
        self.rew_p = np.zeros(capacity, dtype=np.float32)
        self.rew_e = np.zeros(capacity, dtype=np.float32)
        self.next_obs_p = np.zeros((capacity, OBS_DIM), dtype=np.float32)
        self.next_obs_e = np.zeros((capacity, OBS_DIM), dtype=np.float32)
        # Terminal means capture: the value target must not bootstrap past
        # it. Step-budget truncation is not terminal and does bootstrap.
        self.terminal = np.zeros(capacity, dtype=np.float32)

    def __len__(self) -> int:
        return self._size

    def push(
        self,
        obs_p: np.ndarray,
        obs_e: np.ndarray,
        act_p: np.ndarray,
        act_e: np.ndarray,
        rew_p: float,
        rew_e: float,
        next_obs_p: np.ndarray,
        next_obs_e: np.ndarray,
        terminal: bool,
    ) -> None:
        i = self._next
        self.obs_p[i] = obs_p
        self.obs_e[i] = obs_e
        self.act_p[i] = act_p
        self.act_e[i] = act_e
        self.rew_p[i] = rew_p
        self.rew_e[i] = rew_e
        self.next_obs_p[i] = next_obs_p
        self.next_obs_e[i] = next_obs_e
        self.terminal[i] = 1.0 if terminal else 0.0
        self._next = (i + 1) % self.capacity
        self._size = min(self._size + 1, self.capacity)

    def sample(self, batch_size: int) -> dict[str, np.ndarray]:
        if batch_size > self._size:
            raise ValueError(f"cannot sample {batch_size} from {self._size} stored")
        idx = self._rng.integers(0, self._size, size=batch_size)
        return {
            "obs_p": self.obs_p[idx],
            "obs_e": self.obs_e[idx],
            "act_p": self.act_p[idx],
            "act_e": self.act_e[idx],
            "rew_p": self.rew_p[idx],
            "rew_e": self.rew_e[idx],
            "next_obs_p": self.next_obs_p[idx],
            "next_obs_e": self.next_obs_e[idx],
            "terminal": self.terminal[idx],
        }
