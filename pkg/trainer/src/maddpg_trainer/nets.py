"""Actor and critic networks.

The actor is the exportable architecture: 8 -> 64 -> 64 -> 2 with Relu,
Relu, Tanh, the output scaled by the agent's acceleration budget. The
critic is centralized: it scores the joint observation-action vector of
both agents (8 + 8 + 2 + 2 = 20 inputs).

Both networks rescale their inputs by fixed constants before the first
layer. Raw observations mix velocities bounded by the terminal speed
with positions that range over tens of meters; feeding them unscaled
drives the actor's tanh head into saturation early in training and it
never recovers. The scale factors are exact powers of two so the actor's
copy can be folded into its first-layer weights at export time without
changing a single bit of the forward pass; the exported file therefore
consumes raw observations like any other policy.
"""

from __future__ import annotations

import torch
from torch import nn

from .env import ACT_DIM, OBS_DIM

HIDDEN = 64
JOINT_DIM = 2 * OBS_DIM + 2 * ACT_DIM

# One entry per observation slot [own_vel, own_pos, other_rel_pos,
# other_vel]: velocities shrink by 1/8 (the largest terminal speed),
# absolute positions by 1/16 (the training arena scale), relative
# position by 1/8 so near-capture geometry keeps a usable magnitude.
# Powers of two only.
OBS_SCALE = (0.125, 0.125, 0.0625, 0.0625, 0.125, 0.125, 0.125, 0.125)

_IDENTITY_SCALE = (1.0,) * OBS_DIM

# Final linear layers start near zero, the usual deterministic
# policy-gradient recipe: the policy begins centered instead of pinned
# to a random corner of the action box, and early critic values stay
# small.
FINAL_LAYER_INIT = 3e-3


def _init_final_layer(layer: nn.Module) -> None:
    assert isinstance(layer, nn.Linear)
    nn.init.uniform_(layer.weight, -FINAL_LAYER_INIT, FINAL_LAYER_INIT)
    nn.init.uniform_(layer.bias, -FINAL_LAYER_INIT, FINAL_LAYER_INIT)


class Actor(nn.Module):
    def __init__(self, a_max: float, obs_scale: tuple[float, ...] = OBS_SCALE) -> None:
        super().__init__()
        self.a_max = float(a_max)
        self.register_buffer(
            "obs_scale", torch.tensor(obs_scale, dtype=torch.float32)
        )
        self.body = nn.Sequential(
            nn.Linear(OBS_DIM, HIDDEN),
            nn.ReLU(),
            nn.Linear(HIDDEN, HIDDEN),
            nn.ReLU(),
            nn.Linear(HIDDEN, ACT_DIM),
            nn.Tanh(),
        )
        _init_final_layer(self.body[4])

    def pre_activation(self, obs: torch.Tensor) -> torch.Tensor:
        """Output of the final linear layer, before the tanh squash."""
        x = obs * self.obs_scale
        for module in self.body[:-1]:
            x = module(x)
        return x

    def forward(self, obs: torch.Tensor) -> torch.Tensor:
        return self.a_max * torch.tanh(self.pre_activation(obs))


class Critic(nn.Module):
    def __init__(self, a_p_max: float, a_e_max: float) -> None:
        super().__init__()
        scale = [
            *OBS_SCALE,
            *OBS_SCALE,
            *([1.0 / a_p_max if a_p_max > 0.0 else 1.0] * ACT_DIM),
            *([1.0 / a_e_max if a_e_max > 0.0 else 1.0] * ACT_DIM),
        ]
        self.register_buffer(
            "joint_scale", torch.tensor(scale, dtype=torch.float32)
        )
        self.body = nn.Sequential(
            nn.Linear(JOINT_DIM, HIDDEN),
            nn.ReLU(),
            nn.Linear(HIDDEN, HIDDEN),
            nn.ReLU(),
            nn.Linear(HIDDEN, 1),
        )
        _init_final_layer(self.body[4])

    def forward(self, joint: torch.Tensor) -> torch.Tensor:
        return self.body(joint * self.joint_scale)


def soft_update(target: nn.Module, source: nn.Module, tau: float) -> None:
    with torch.no_grad():
        for t, s in zip(target.parameters(), source.parameters()):
            t.mul_(1.0 - tau).add_(s, alpha=tau)


def hard_update(target: nn.Module, source: nn.Module) -> None:
    target.load_state_dict(source.state_dict())
