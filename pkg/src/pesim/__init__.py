"""Deterministic planar pursuit-evasion simulation engine.

A pursuer and an evader move as damped unit masses on the open plane under
bounded self-propelled acceleration. The package rolls out single games
under baseline or learned (neural network) feedback strategies, maps
capture/escape zones over the acceleration plane, and fits the phase
transition line separating them.
"""

from .dynamics import (
    MU_ZERO_THRESHOLD,
    AgentState,
    Scheme,
    WorldParams,
    clamp_acceleration,
    speed_bound,
    step,
    unit_vector_to_evader,
)
from .episode import (
    EpisodeConfig,
    EpisodeResult,
    Outcome,
    TrajectoryRow,
    episode_steps,
    is_captured,
    reward,
    run_episode,
    trajectory_csv_rows,
    write_trajectory_csv,
)
from .errors import (
    CoincidentAgentsError,
    CsvFormatError,
    DegenerateFitError,
    InvalidDirectionError,
    NoBoundaryError,
    PolicyMismatchError,
    ShapeError,
    SimulationError,
    SweepCellError,
    UnstableStepError,
    WeightFileError,
)
from .golden import build_fixture, fixture_json
from .mlp import Activation, Layer, MlpNet, forward, load_policy, save_policy
from .observation import (
    OBS_DIM,
    OBS_LAYOUT,
    GameObservation,
    Perspective,
    build_observation,
)
from .strategies import (
    Policy,
    PolicyKind,
    baseline_evasion,
    baseline_pursuit,
    perpendicular_turn,
    policy_action,
)
from .vec import Vec2
from .zonemap import (
    BoundaryResult,
    GridSpec,
    LineFit,
    ZoneGrid,
    boundary_from_outcomes,
    default_grid,
    default_zone_template,
    extract_boundary,
    fit_phase_line,
    fit_summary,
    read_zone_csv,
    sweep,
    zone_csv_rows,
)

__version__ = "0.1.0"

__all__ = [
    "MU_ZERO_THRESHOLD",
    "OBS_DIM",
    "OBS_LAYOUT",
    "Activation",
    "AgentState",
    "BoundaryResult",
    "CoincidentAgentsError",
    "CsvFormatError",
    "DegenerateFitError",
    "EpisodeConfig",
    "EpisodeResult",
    "GameObservation",
    "GridSpec",
    "InvalidDirectionError",
    "Layer",
    "LineFit",
    "MlpNet",
    "NoBoundaryError",
    "Outcome",
    "Perspective",
    "Policy",
    "PolicyKind",
    "PolicyMismatchError",
    "Scheme",
    "ShapeError",
    "SimulationError",
    "SweepCellError",
    "TrajectoryRow",
    "UnstableStepError",
    "Vec2",
    "WeightFileError",
    "WorldParams",
    "ZoneGrid",
    "baseline_evasion",
    "baseline_pursuit",
    "boundary_from_outcomes",
    "build_fixture",
    "build_observation",
    "clamp_acceleration",
    "default_grid",
    "default_zone_template",
    "extract_boundary",
    "fit_phase_line",
    "fit_summary",
    "fixture_json",
    "forward",
    "is_captured",
    "load_policy",
    "perpendicular_turn",
    "policy_action",
    "read_zone_csv",
    "reward",
    "episode_steps",
    "run_episode",
    "save_policy",
    "speed_bound",
    "step",
    "sweep",
    "trajectory_csv_rows",
    "unit_vector_to_evader",
    "write_trajectory_csv",
    "zone_csv_rows",
]
