"""Portable weight files.

`export_actor` writes the versioned JSON layer format the engine loads:
row-major weight matrices, per-layer activations, the acceleration budget
baked in, and an observation-layout tag. The actor's fixed input scaling
is folded into the first-layer weights, so the file consumes raw
observations like every other policy. Values are serialized with
Python's shortest round-tripping float representation, so a reader gets
back bit-identical parameters. `forward_doc` evaluates a parsed weight
document the way the engine does (activation per layer, output scaled by
the budget and clamped to its ball); it backs the cross-implementation
parity tests without needing the engine importable.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np
from torch import nn

from .env import ACT_DIM, OBS_DIM, clamp_to_ball
from .errors import ExportError
from .nets import HIDDEN, Actor

FORMAT_VERSION = 1
OBS_LAYOUT = "vel2_pos2_relpos2_othervel2"

_EXPECTED_SHAPES = ((HIDDEN, OBS_DIM), (HIDDEN, HIDDEN), (ACT_DIM, HIDDEN))
_EXPECTED_ACTIVATIONS = ("relu", "relu", "tanh")


def _actor_layers(network: nn.Module) -> list[tuple[np.ndarray, np.ndarray]]:
    body = getattr(network, "body", network)
    if not isinstance(body, nn.Sequential):
        raise ExportError(f"expected a sequential actor body, got {type(body).__name__}")
    modules = list(body)
    kinds = [type(m) for m in modules]
    if kinds != [nn.Linear, nn.ReLU, nn.Linear, nn.ReLU, nn.Linear, nn.Tanh]:
        raise ExportError(
            "actor must be Linear/ReLU/Linear/ReLU/Linear/Tanh, got "
            + "/".join(t.__name__ for t in kinds)
        )
    layers = []
    for linear, shape in zip(modules[::2], _EXPECTED_SHAPES):
        weight = linear.weight.detach().cpu().numpy()
        bias = linear.bias.detach().cpu().numpy()
        if weight.shape != shape:
            raise ExportError(f"layer shape {weight.shape} != expected {shape}")
        layers.append((weight, bias))
    return layers


def actor_doc(network: nn.Module, a_max: float) -> dict:
    if not (math.isfinite(a_max) and a_max >= 0.0):
        raise ExportError(f"a_max must be finite and >= 0, got {a_max}")
    extracted = _actor_layers(network)
    scale = getattr(network, "obs_scale", None)
    if scale is not None:
        # Fold the actor's fixed input scaling into the first layer so the
        # file consumes raw observations. The factors are powers of two,
        # so the fold is exact and the forward pass is unchanged bit for
        # bit.
        weight, bias = extracted[0]
        folded = weight.astype(np.float64) * np.asarray(
            scale.detach().cpu(), dtype=np.float64
        )
        extracted[0] = (folded, bias)
    layers = []
    for (weight, bias), activation in zip(extracted, _EXPECTED_ACTIVATIONS):
        layers.append(
            {
                "rows": weight.shape[0],
                "cols": weight.shape[1],
                "weights": [float(v) for v in weight.reshape(-1)],
                "bias": [float(v) for v in bias],
                "activation": activation,
            }
        )
    return {
        "format_version": FORMAT_VERSION,
        "obs_dim": OBS_DIM,
        "act_dim": ACT_DIM,
        "a_max": float(a_max),
        "obs_layout": OBS_LAYOUT,
        "layers": layers,
    }


def export_actor(network: nn.Module, a_max: float, path: str | Path) -> None:
    doc = actor_doc(network, a_max)
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


def load_doc(path: str | Path) -> dict:
    return json.loads(Path(path).read_text(encoding="utf-8"))


def actor_from_doc(doc: dict) -> Actor:
    """Rebuild a torch actor from an exported document.

    Exported weights already contain the folded input scaling, so the
    rebuilt actor gets an identity scale; re-exporting it reproduces the
    same document.
    """
    import torch

    actor = Actor(float(doc["a_max"]), obs_scale=(1.0,) * OBS_DIM)
    layers = doc["layers"]
    if len(layers) != len(_EXPECTED_SHAPES):
        raise ExportError(f"expected {len(_EXPECTED_SHAPES)} layers, got {len(layers)}")
    with torch.no_grad():
        for linear, layer, shape in zip(actor.body[::2], layers, _EXPECTED_SHAPES):
            if (layer["rows"], layer["cols"]) != shape:
                raise ExportError(
                    f"layer shape ({layer['rows']}, {layer['cols']}) != expected {shape}"
                )
            weight = np.asarray(layer["weights"], dtype=np.float64).reshape(shape)
            linear.weight.copy_(torch.from_numpy(weight))
            linear.bias.copy_(torch.from_numpy(np.asarray(layer["bias"], dtype=np.float64)))
    return actor


def forward_doc(doc: dict, obs: np.ndarray) -> np.ndarray:
    """Evaluate a weight document on one observation, engine semantics."""
    x = np.asarray(obs, dtype=np.float64)
    if x.shape != (doc["obs_dim"],):
        raise ValueError(f"observation shape {x.shape} != ({doc['obs_dim']},)")
    for layer in doc["layers"]:
        weight = np.asarray(layer["weights"], dtype=np.float64).reshape(
            layer["rows"], layer["cols"]
        )
        bias = np.asarray(layer["bias"], dtype=np.float64)
        x = weight @ x + bias
        activation = layer["activation"]
        if activation == "relu":
            x = np.maximum(x, 0.0)
        elif activation == "tanh":
            x = np.tanh(x)
        elif activation != "identity":
            raise ValueError(f"unknown activation {activation!r}")
    scaled = float(doc["a_max"]) * x
    return np.asarray(clamp_to_ball((scaled[0], scaled[1]), float(doc["a_max"])))
