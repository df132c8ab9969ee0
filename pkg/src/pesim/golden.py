"""Pinned cross-component fixture: dynamics steps and network forwards.

The fixture file is the contract glue between this engine and the training
stack that produces weight files. It carries 32 single-step cases under the
damped semi-implicit Euler update (the scheme policies are trained against)
and 8 network forward cases spanning the accepted layer shapes and
activations. Any independent reimplementation of the step rule or the
forward pass must reproduce the recorded outputs within 1e-6 and 1e-5 per
component respectively.

Every real in the file is rounded to 9 significant digits, and the outputs
are computed from the rounded inputs, so the file is self-consistent and
regenerates identically on any platform.
"""

from __future__ import annotations

import json
from typing import Iterator

import numpy as np

from .dynamics import AgentState, Scheme, WorldParams, step
from .mlp import ACT_DIM, FORMAT_VERSION, Activation, Layer, MlpNet, forward, save_policy
from .observation import OBS_DIM
from .vec import Vec2

GOLDEN_MU = 0.5
GOLDEN_DT = 0.1
N_STEP_CASES = 32
N_MLP_CASES = 8
_SEED = 766120318

STEP_TOLERANCE = 1e-6
FORWARD_TOLERANCE = 1e-5


def _round9(x: float) -> float:
    return float(f"{x:.9g}")


def _round9_list(values: Iterator[float] | list[float] | np.ndarray) -> list[float]:
    return [_round9(float(v)) for v in values]


def _step_world() -> WorldParams:
    # t_max is irrelevant for single-step cases; any value >= dt works.
    return WorldParams(
        mu=GOLDEN_MU,
        eps=0.5,
        dt=GOLDEN_DT,
        t_max=GOLDEN_DT,
        scheme=Scheme.SEMI_IMPLICIT_EULER,
    )


def _step_inputs(rng: np.random.Generator) -> list[tuple[Vec2, Vec2, Vec2]]:
    cases = [
        # Hand-pinned anchors: full thrust from rest, and a fixed point.
        (Vec2(0.0, 0.0), Vec2(0.0, 0.0), Vec2(4.0, 0.0)),
        (Vec2(1.0, -2.0), Vec2(0.0, 0.0), Vec2(0.0, 0.0)),
    ]
    while len(cases) < N_STEP_CASES:
        pos = rng.uniform(-15.0, 15.0, 2)
        vel = rng.uniform(-8.0, 8.0, 2)
        angle = rng.uniform(0.0, 2.0 * np.pi)
        mag = rng.uniform(0.0, 4.0)
        acc = (mag * np.cos(angle), mag * np.sin(angle))
        cases.append(
            (
                Vec2(_round9(pos[0]), _round9(pos[1])),
                Vec2(_round9(vel[0]), _round9(vel[1])),
                Vec2(_round9(acc[0]), _round9(acc[1])),
            )
        )
    return cases


def _random_net(
    rng: np.random.Generator,
    widths: list[int],
    activations: list[Activation],
    a_max: float,
    weight_scale: float = 0.5,
    zero: bool = False,
) -> MlpNet:
    layers = []
    for i, act in enumerate(activations):
        rows, cols = widths[i + 1], widths[i]
        if zero:
            w = np.zeros((rows, cols))
            b = np.zeros(rows)
        else:
            w = np.array(
                [_round9_list(row) for row in rng.normal(0.0, weight_scale, (rows, cols))]
            )
            b = np.array(_round9_list(rng.normal(0.0, 0.1, rows)))
        w.flags.writeable = False
        b.flags.writeable = False
        layers.append(Layer(w, b, act))
    return MlpNet(tuple(layers), OBS_DIM, ACT_DIM, a_max)


def _mlp_inputs(rng: np.random.Generator) -> list[tuple[MlpNet, list[float]]]:
    relu, tanh, ident = Activation.RELU, Activation.TANH, Activation.IDENTITY
    nets = [
        # Minimal legal net: one identity layer straight from obs to action.
        _random_net(rng, [8, 2], [ident], a_max=1.0),
        _random_net(rng, [8, 4, 2], [relu, tanh], a_max=4.0),
        _random_net(rng, [8, 8, 2], [tanh, tanh], a_max=2.0),
        _random_net(rng, [8, 4, 4, 2], [relu, relu, ident], a_max=3.0),
        # The exporter's shape at both acceleration budgets in play.
        _random_net(rng, [8, 64, 64, 2], [relu, relu, tanh], a_max=4.0),
        _random_net(rng, [8, 64, 64, 2], [relu, relu, tanh], a_max=2.4),
        # Wide-weight identity head, guaranteed to engage the norm clamp.
        _random_net(rng, [8, 6, 2], [relu, ident], a_max=2.0, weight_scale=1.0),
        _random_net(rng, [8, 4, 2], [relu, tanh], a_max=4.0, zero=True),
    ]
    assert len(nets) == N_MLP_CASES
    return [
        (net, _round9_list(rng.uniform(-10.0, 10.0, OBS_DIM))) for net in nets
    ]


def build_fixture() -> dict:
    """Assemble the fixture document with inputs and recorded outputs."""
    rng = np.random.default_rng(_SEED)
    world = _step_world()
    step_cases = []
    for pos, vel, acc in _step_inputs(rng):
        nxt = step(AgentState(pos, vel), acc, world)
        step_cases.append(
            {
                "x": [pos.x, pos.y],
                "v": [vel.x, vel.y],
                "a": [acc.x, acc.y],
                "x_next": _round9_list([nxt.pos.x, nxt.pos.y]),
                "v_next": _round9_list([nxt.vel.x, nxt.vel.y]),
            }
        )

    mlp_cases = []
    for net, obs in _mlp_inputs(rng):
        out = forward(net, obs)
        mlp_cases.append(
            {
                "net": json.loads(save_policy(net)),
                "obs": obs,
                "out": _round9_list([out.x, out.y]),
            }
        )

    return {
        "format_version": FORMAT_VERSION,
        "scheme": Scheme.SEMI_IMPLICIT_EULER.value,
        "mu": GOLDEN_MU,
        "dt": GOLDEN_DT,
        "step_tolerance": STEP_TOLERANCE,
        "forward_tolerance": FORWARD_TOLERANCE,
        "step_cases": step_cases,
        "mlp_cases": mlp_cases,
    }


def fixture_json() -> bytes:
    return (json.dumps(build_fixture(), indent=2) + "\n").encode("utf-8")
