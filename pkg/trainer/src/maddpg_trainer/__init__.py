"""MADDPG training for the planar pursuit-evasion game.

Learns pursuer and evader policies with centralized critics and
decentralized actors on an environment that mirrors the engine's
semi-implicit Euler dynamics, then exports the actors in the portable
weight file format the engine loads.
"""

from .config import TrainConfig
from .env import (
    ACT_DIM,
    CAPTURE_PENALTY,
    OBS_DIM,
    SEPARATION_REWARD_GAIN,
    PursuitEvasionEnv,
    StepResult,
    clamp_to_ball,
    euler_step,
    game_reward,
)
from .errors import (
    EnvironmentFault,
    ExportError,
    TrainerError,
    TrainingDivergedError,
)
from .maddpg import (
    BOUNDARY_RADIUS,
    REWARD_CSV_HEADER,
    MaddpgTrainer,
    TrainLog,
    boundary_penalty,
    plateaued,
    read_reward_csv,
    write_reward_csv,
)
from .nets import HIDDEN, JOINT_DIM, Actor, Critic, hard_update, soft_update
from .replay import ReplayBuffer
from .weights import (
    FORMAT_VERSION,
    OBS_LAYOUT,
    actor_doc,
    actor_from_doc,
    export_actor,
    forward_doc,
    load_doc,
)

__version__ = "0.1.0"

__all__ = [
    "ACT_DIM",
    "Actor",
    "BOUNDARY_RADIUS",
    "CAPTURE_PENALTY",
    "Critic",
    "EnvironmentFault",
    "ExportError",
    "FORMAT_VERSION",
    "HIDDEN",
    "JOINT_DIM",
    "MaddpgTrainer",
    "OBS_DIM",
    "OBS_LAYOUT",
    "PursuitEvasionEnv",
    "REWARD_CSV_HEADER",
    "ReplayBuffer",
    "SEPARATION_REWARD_GAIN",
    "StepResult",
    "TrainConfig",
    "TrainLog",
    "TrainerError",
    "TrainingDivergedError",
    "actor_doc",
    "actor_from_doc",
    "boundary_penalty",
    "clamp_to_ball",
    "euler_step",
    "export_actor",
    "forward_doc",
    "game_reward",
    "hard_update",
    "load_doc",
    "plateaued",
    "read_reward_csv",
    "soft_update",
    "write_reward_csv",
    "__version__",
]
