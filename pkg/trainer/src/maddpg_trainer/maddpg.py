"""MADDPG training loop: centralized critics, decentralized actors.

Each agent's critic scores the joint observation-action vector; each
actor sees only its own observation. Updates run every
`update_interval` environment steps once the replay buffer holds a
warm-up margin. Episode rollouts draw actions from a float64 snapshot of
the current actor weights, refreshed after every update round, so the
hot loop stays out of torch; the snapshot is the same network, just
evaluated in numpy.

Capture is the only terminal transition for bootstrapping; running out
of the step budget truncates the episode but the value target still
bootstraps through it.
"""

from __future__ import annotations

import copy
import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import torch
from torch import nn

from .config import TrainConfig
from .env import ACT_DIM, OBS_DIM, PursuitEvasionEnv, clamp_to_ball
from .errors import TrainingDivergedError
from .nets import Actor, Critic, hard_update, soft_update
from .replay import ReplayBuffer
from .weights import export_actor

BOUNDARY_RADIUS = 25.0
BOUNDARY_PENALTY_CAP = 10.0
GRAD_CLIP = 0.5
# Both agents play uniformly random accelerations for this many
# transitions before any gradient step, standard practice for
# deterministic-policy learners. The buffer never evicts over a full
# run, so this early blanket of action coverage permanently anchors the
# critics' action rankings: without it, whichever direction the policy
# first drifts toward is the only region with data, the critic
# extrapolates freely everywhere else, and ascent on those fantasies
# locks the drift in (the pursuer reliably ends up fleeing).
WARMUP_TRANSITIONS = 20_000
# Weight on the mean squared pre-tanh actor output. The squash head is
# the classic deterministic-policy failure mode: once the preactivation
# drifts past a few units its gradient is numerically zero and the
# policy freezes. This weight balances the critic's pull at a
# preactivation magnitude of two to four, where the output still reaches
# ~99% of the budget but the gradient is alive.
ACTOR_PREACT_REG = 1e-2

PLATEAU_LONG_WINDOW = 500
PLATEAU_SHORT_WINDOW = 100
PLATEAU_REL_TOL = 0.10

REWARD_CSV_HEADER = "episode,avg_r_p,avg_r_e"


@dataclass
class TrainLog:
    """Per-episode mean game rewards plus the exported artifact paths."""

    avg_r_p: list[float] = field(default_factory=list)
    avg_r_e: list[float] = field(default_factory=list)
    checkpoint_paths: tuple[str, ...] = ()
    converged: bool = False

    def __post_init__(self) -> None:
        if len(self.avg_r_p) != len(self.avg_r_e):
            raise ValueError("reward series lengths differ")

    @property
    def episodes(self) -> int:
        return len(self.avg_r_p)


def plateaued(
    series: list[float],
    long_window: int = PLATEAU_LONG_WINDOW,
    short_window: int = PLATEAU_SHORT_WINDOW,
    rel_tol: float = PLATEAU_REL_TOL,
) -> bool:
    """True when the long-window mean sits within rel_tol of the short one."""
    if len(series) < long_window:
        return False
    long_mean = sum(series[-long_window:]) / long_window
    short_mean = sum(series[-short_window:]) / short_window
    return abs(long_mean - short_mean) <= rel_tol * abs(short_mean)


def boundary_penalty(pos: tuple[float, float], coeff: float) -> float:
    """Quadratic cost beyond the training arena radius; zero inside.

    Capped at the capture-reward magnitude, the same convention as the
    particle environments' bound cost. Left uncapped, deep excursions
    store per-step costs two orders above every game reward, and the
    pursuer's critic learns that following a fleeing evader outward is
    worse than abandoning the chase.
    """
    excess = math.hypot(pos[0], pos[1]) - BOUNDARY_RADIUS
    if excess <= 0.0:
        return 0.0
    return min(coeff * excess * excess, BOUNDARY_PENALTY_CAP)


class _ActorSnapshot:
    """Float64 copy of an actor's weights for cheap rollout inference."""

    def __init__(self, actor: Actor) -> None:
        self.a_max = actor.a_max
        self.obs_scale = np.ones(OBS_DIM)
        self.layers: list[tuple[np.ndarray, np.ndarray]] = []
        self.refresh(actor)

    def refresh(self, actor: Actor) -> None:
        self.obs_scale = np.asarray(actor.obs_scale.detach(), dtype=np.float64)
        self.layers = [
            (
                linear.weight.detach().numpy().astype(np.float64),
                linear.bias.detach().numpy().astype(np.float64),
            )
            for linear in actor.body[::2]
        ]

    def act(self, obs: np.ndarray) -> np.ndarray:
        (w1, b1), (w2, b2), (w3, b3) = self.layers
        h = np.maximum(w1 @ (obs * self.obs_scale) + b1, 0.0)
        h = np.maximum(w2 @ h + b2, 0.0)
        return self.a_max * np.tanh(w3 @ h + b3)


class _Learner:
    """One agent's networks, targets, and optimizers."""

    def __init__(self, a_max: float, config: TrainConfig) -> None:
        self.actor = Actor(a_max)
        self.actor_target = Actor(a_max)
        self.critic = Critic(config.a_p_max, config.a_e_max)
        self.critic_target = Critic(config.a_p_max, config.a_e_max)
        hard_update(self.actor_target, self.actor)
        hard_update(self.critic_target, self.critic)
        self.actor_opt = torch.optim.Adam(self.actor.parameters(), lr=config.actor_lr)
        self.critic_opt = torch.optim.Adam(self.critic.parameters(), lr=config.critic_lr)


class MaddpgTrainer:
    def __init__(self, config: TrainConfig, out_dir: str | Path) -> None:
        self.config = config
        self.out_dir = Path(out_dir)
        torch.manual_seed(config.seed)
        self._rollout_rng = np.random.default_rng([config.seed, 0])
        self._buffer = ReplayBuffer(
            config.replay_capacity, np.random.default_rng([config.seed, 1])
        )
        self._env = PursuitEvasionEnv(
            mu=config.mu,
            eps=config.eps,
            dt=config.dt,
            episode_len_steps=config.episode_len_steps,
            a_p_max=config.a_p_max,
            a_e_max=config.a_e_max,
        )
        self.pursuer = _Learner(config.a_p_max, config)
        self.evader = _Learner(config.a_e_max, config)
        self._snap_p = _ActorSnapshot(self.pursuer.actor)
        self._snap_e = _ActorSnapshot(self.evader.actor)
        # capped so short diagnostic runs still reach the learning phase
        self._warmup = min(
            WARMUP_TRANSITIONS,
            (config.episodes * config.episode_len_steps) // 2,
        )
        self._last_finite: tuple[dict, dict] | None = None

    # -- rollout ----------------------------------------------------------

    def _spawn(self) -> tuple[float, float]:
        cfg = self.config
        radius = self._rollout_rng.uniform(cfg.spawn_radius_min, cfg.spawn_radius_max)
        angle = self._rollout_rng.uniform(0.0, 2.0 * math.pi)
        return (radius * math.cos(angle), radius * math.sin(angle))

    def _noisy_action(
        self, snapshot: _ActorSnapshot, obs: np.ndarray, sigma: float
    ) -> np.ndarray:
        # sigma is a fraction of the agent's budget, matching the
        # reference implementation's normalized action range
        action = snapshot.act(obs)
        if sigma > 0.0:
            action = action + snapshot.a_max * sigma * self._rollout_rng.standard_normal(
                ACT_DIM
            )
        return np.asarray(clamp_to_ball((action[0], action[1]), snapshot.a_max))

    def _uniform_action(self, a_max: float) -> np.ndarray:
        # uniform over the acceleration disc
        radius = a_max * math.sqrt(self._rollout_rng.uniform())
        angle = self._rollout_rng.uniform(0.0, 2.0 * math.pi)
        return np.array([radius * math.cos(angle), radius * math.sin(angle)])

    def _scripted_pursuit_action(self, sigma: float) -> np.ndarray:
        # full thrust along the line of sight, the same law the engine's
        # baseline pursuer plays
        a_max = self.config.a_p_max
        (px, py), (ex, ey) = self._env.positions
        sep = math.hypot(ex - px, ey - py)
        if sep == 0.0:
            return np.zeros(ACT_DIM)
        action = np.array([(ex - px) / sep * a_max, (ey - py) / sep * a_max])
        if sigma > 0.0:
            action = action + a_max * sigma * self._rollout_rng.standard_normal(ACT_DIM)
        return np.asarray(clamp_to_ball((action[0], action[1]), a_max))

    # -- learning ---------------------------------------------------------

    def _update_agent(
        self,
        learner: _Learner,
        own: str,
        tensors: dict[str, torch.Tensor],
    ) -> tuple[float, float]:
        cfg = self.config
        obs_own = tensors[f"obs_{own}"]
        rew_own = tensors[f"rew_{own}"]

        with torch.no_grad():
            next_a_p = self.pursuer.actor_target(tensors["next_obs_p"])
            next_a_e = self.evader.actor_target(tensors["next_obs_e"])
            next_joint = torch.cat(
                [tensors["next_obs_p"], tensors["next_obs_e"], next_a_p, next_a_e],
                dim=1,
            )
            target_q = learner.critic_target(next_joint).squeeze(1)
            y = rew_own + cfg.gamma * (1.0 - tensors["terminal"]) * target_q

        joint = torch.cat(
            [tensors["obs_p"], tensors["obs_e"], tensors["act_p"], tensors["act_e"]],
            dim=1,
        )
        q = learner.critic(joint).squeeze(1)
        critic_loss = nn.functional.mse_loss(q, y)
        learner.critic_opt.zero_grad()
        critic_loss.backward()
        nn.utils.clip_grad_norm_(learner.critic.parameters(), GRAD_CLIP)
        learner.critic_opt.step()

        pre = learner.actor.pre_activation(obs_own)
        own_action = learner.actor.a_max * torch.tanh(pre)
        if own == "p":
            joint_pi = torch.cat(
                [tensors["obs_p"], tensors["obs_e"], own_action, tensors["act_e"]],
                dim=1,
            )
        else:
            joint_pi = torch.cat(
                [tensors["obs_p"], tensors["obs_e"], tensors["act_p"], own_action],
                dim=1,
            )
        actor_loss = (
            -learner.critic(joint_pi).mean() + ACTOR_PREACT_REG * pre.pow(2).mean()
        )
        learner.actor_opt.zero_grad()
        actor_loss.backward()
        nn.utils.clip_grad_norm_(learner.actor.parameters(), GRAD_CLIP)
        learner.actor_opt.step()

        soft_update(learner.actor_target, learner.actor, cfg.tau)
        soft_update(learner.critic_target, learner.critic, cfg.tau)
        return float(critic_loss.detach()), float(actor_loss.detach())

    def _update_round(self) -> None:
        losses = []
        # each agent learns from its own draw, as in the reference
        for learner, own in ((self.pursuer, "p"), (self.evader, "e")):
            batch = self._buffer.sample(self.config.batch_size)
            tensors = {k: torch.from_numpy(v) for k, v in batch.items()}
            losses += self._update_agent(learner, own, tensors)
        if not all(math.isfinite(v) for v in losses):
            self._abort(f"non-finite loss in update round: {losses}")
        self._snap_p.refresh(self.pursuer.actor)
        self._snap_e.refresh(self.evader.actor)

    # -- divergence handling ----------------------------------------------

    def _remember_finite(self) -> None:
        self._last_finite = (
            copy.deepcopy(self.pursuer.actor.state_dict()),
            copy.deepcopy(self.evader.actor.state_dict()),
        )

    def _abort(self, reason: str) -> None:
        paths = []
        if self._last_finite is not None:
            cfg = self.config
            for name, state, a_max in (
                ("checkpoint_pursuer.json", self._last_finite[0], cfg.a_p_max),
                ("checkpoint_evader.json", self._last_finite[1], cfg.a_e_max),
            ):
                actor = Actor(a_max)
                actor.load_state_dict(state)
                path = self.out_dir / name
                export_actor(actor, a_max, path)
                paths.append(str(path))
        raise TrainingDivergedError(
            f"training diverged: {reason}; last finite checkpoint saved", tuple(paths)
        )

    # -- main loop --------------------------------------------------------

    def train(self, progress_every: int = 0, snapshot_every: int = 0) -> TrainLog:
        """Run the configured number of episodes and export the actors.

        `progress_every` prints a short status line every N episodes;
        `snapshot_every` additionally exports the current actor pair to
        out_dir/snapshots/epNNNNN every N episodes. Snapshots are plain
        reads of the network parameters, so enabling them changes nothing
        about the trained result.
        """
        cfg = self.config
        self.out_dir.mkdir(parents=True, exist_ok=True)
        log = TrainLog()
        self._remember_finite()
        total_steps = 0

        for episode in range(cfg.episodes):
            sigma = cfg.noise_sigma * cfg.noise_decay**episode
            obs_p, obs_e = self._env.reset(self._spawn(), (0.0, 0.0))
            # short-circuit keeps the rng stream of mix-free runs unchanged
            scripted_pursuer = (
                cfg.scripted_pursuer_mix > 0.0
                and self._rollout_rng.uniform() < cfg.scripted_pursuer_mix
            )
            reward_sum_p = 0.0
            reward_sum_e = 0.0
            steps = 0

            while True:
                if total_steps < self._warmup:
                    act_p = self._uniform_action(self.config.a_p_max)
                    act_e = self._uniform_action(self.config.a_e_max)
                else:
                    if scripted_pursuer:
                        act_p = self._scripted_pursuit_action(sigma)
                    else:
                        act_p = self._noisy_action(self._snap_p, obs_p, sigma)
                    act_e = self._noisy_action(self._snap_e, obs_e, sigma)
                result = self._env.step((act_p[0], act_p[1]), (act_e[0], act_e[1]))
                reward_sum_p += result.r_p
                reward_sum_e += result.r_e
                steps += 1
                total_steps += 1

                x_p, x_e = self._env.positions
                stored_r_p = result.r_p - boundary_penalty(
                    x_p, cfg.boundary_penalty_coeff
                )
                stored_r_e = result.r_e - boundary_penalty(
                    x_e, cfg.boundary_penalty_coeff
                )
                self._buffer.push(
                    obs_p,
                    obs_e,
                    act_p,
                    act_e,
                    stored_r_p,
                    stored_r_e,
                    result.obs_p,
                    result.obs_e,
                    result.captured,
                )
                obs_p, obs_e = result.obs_p, result.obs_e

                if (
                    total_steps % cfg.update_interval == 0
                    and len(self._buffer) >= self._warmup
                ):
                    self._update_round()
                if result.done:
                    break

            avg_p = reward_sum_p / steps
            avg_e = reward_sum_e / steps
            if not (math.isfinite(avg_p) and math.isfinite(avg_e)):
                self._abort(f"non-finite episode reward at episode {episode}")
            log.avg_r_p.append(avg_p)
            log.avg_r_e.append(avg_e)
            self._remember_finite()

            if snapshot_every and (episode + 1) % snapshot_every == 0:
                snap_dir = self.out_dir / "snapshots" / f"ep{episode + 1:05d}"
                snap_dir.mkdir(parents=True, exist_ok=True)
                export_actor(self.pursuer.actor, cfg.a_p_max, snap_dir / "pursuer.json")
                export_actor(self.evader.actor, cfg.a_e_max, snap_dir / "evader.json")

            if progress_every and (episode + 1) % progress_every == 0:
                window = min(PLATEAU_SHORT_WINDOW, len(log.avg_r_p))
                mean_p = sum(log.avg_r_p[-window:]) / window
                mean_e = sum(log.avg_r_e[-window:]) / window
                print(
                    f"episode {episode + 1}/{cfg.episodes}"
                    f" avg_r_p={mean_p:+.3f} avg_r_e={mean_e:+.3f}"
                    f" sigma={sigma:.3f}",
                    flush=True,
                )

        log.converged = plateaued(log.avg_r_p) and plateaued(log.avg_r_e)
        if cfg.episodes > 0:
            pursuer_path = self.out_dir / "pursuer.json"
            evader_path = self.out_dir / "evader.json"
            export_actor(self.pursuer.actor, cfg.a_p_max, pursuer_path)
            export_actor(self.evader.actor, cfg.a_e_max, evader_path)
            log.checkpoint_paths = (str(pursuer_path), str(evader_path))
        return log


def write_reward_csv(log: TrainLog, path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(REWARD_CSV_HEADER.split(","))
        for episode, (r_p, r_e) in enumerate(zip(log.avg_r_p, log.avg_r_e), start=1):
            writer.writerow([episode, f"{r_p:.9g}", f"{r_e:.9g}"])


def read_reward_csv(path: str | Path) -> TrainLog:
    avg_r_p: list[float] = []
    avg_r_e: list[float] = []
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header != REWARD_CSV_HEADER.split(","):
            raise ValueError(f"unexpected reward CSV header: {header}")
        for row in reader:
            avg_r_p.append(float(row[1]))
            avg_r_e.append(float(row[2]))
    return TrainLog(avg_r_p=avg_r_p, avg_r_e=avg_r_e)
