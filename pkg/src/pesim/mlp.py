"""Feed-forward network inference and the portable weight file format.

Learned actors are trained elsewhere, exported as small JSON weight files,
and replayed here. The engine side deliberately knows nothing about
training: it loads a validated stack of affine layers, runs them in float64,
scales the 2-component output by the actor's acceleration budget, and
norm-clamps the result.

The file format is pinned so that a mismatch between exporter and replayer
fails loudly instead of silently producing garbage actions:

    {
      "format_version": 1,
      "obs_dim": 8,
      "act_dim": 2,
      "a_max": 4.0,
      "obs_layout": "vel2_pos2_relpos2_othervel2",
      "layers": [
        {"rows": 64, "cols": 8, "weights": [...], "bias": [...],
         "activation": "relu"},
        ...
      ]
    }

Weights are row-major; layer i's `cols` must equal layer i-1's `rows`.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .dynamics import clamp_acceleration
from .errors import ShapeError, WeightFileError
from .observation import OBS_DIM, OBS_LAYOUT
from .vec import Vec2

FORMAT_VERSION = 1
ACT_DIM = 2


class Activation(Enum):
    RELU = "relu"
    TANH = "tanh"
    IDENTITY = "identity"

    def apply(self, v: np.ndarray) -> np.ndarray:
        if self is Activation.RELU:
            return np.maximum(v, 0.0)
        if self is Activation.TANH:
            return np.tanh(v)
        return v


@dataclass(frozen=True, slots=True)
class Layer:
    weights: np.ndarray  # (rows, cols), float64
    bias: np.ndarray  # (rows,), float64
    activation: Activation

    @property
    def rows(self) -> int:
        return self.weights.shape[0]

    @property
    def cols(self) -> int:
        return self.weights.shape[1]


@dataclass(frozen=True, slots=True)
class MlpNet:
    """Immutable affine/activation stack mapping an 8-slot observation to a
    2-component action direction, with the exporter's acceleration budget."""

    layers: tuple[Layer, ...]
    obs_dim: int
    act_dim: int
    a_max: float


def _require(cond: bool, path: str, msg: str) -> None:
    if not cond:
        raise WeightFileError(f"{path}: {msg}")


def _finite_array(values: object, path: str, length: int) -> np.ndarray:
    _require(isinstance(values, list), path, "expected an array of reals")
    assert isinstance(values, list)
    _require(
        len(values) == length, path, f"expected {length} values, got {len(values)}"
    )
    arr = np.empty(length, dtype=np.float64)
    for i, v in enumerate(values):
        _require(
            isinstance(v, (int, float)) and not isinstance(v, bool),
            f"{path}[{i}]",
            f"expected a real, got {v!r}",
        )
        f = float(v)
        _require(math.isfinite(f), f"{path}[{i}]", f"non-finite value {v!r}")
        arr[i] = f
    return arr


def _positive_int(value: object, path: str) -> int:
    _require(
        isinstance(value, int) and not isinstance(value, bool) and value > 0,
        path,
        f"expected a positive integer, got {value!r}",
    )
    assert isinstance(value, int)
    return value


def load_policy(data: bytes | str) -> MlpNet:
    """Parse and validate a weight file.

    Raises WeightFileError naming the offending field (or the byte offset for
    a syntax error) on any malformed input.
    """
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as e:
            raise WeightFileError(f"not UTF-8 text: {e}") from e
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as e:
        raise WeightFileError(f"syntax error at offset {e.pos}: {e.msg}") from e

    _require(isinstance(doc, dict), "$", "expected a top-level object")
    version = doc.get("format_version")
    _require(
        version == FORMAT_VERSION,
        "format_version",
        f"expected {FORMAT_VERSION}, got {version!r}",
    )
    obs_dim = doc.get("obs_dim")
    _require(obs_dim == OBS_DIM, "obs_dim", f"expected {OBS_DIM}, got {obs_dim!r}")
    act_dim = doc.get("act_dim")
    _require(act_dim == ACT_DIM, "act_dim", f"expected {ACT_DIM}, got {act_dim!r}")
    layout = doc.get("obs_layout")
    _require(
        layout == OBS_LAYOUT, "obs_layout", f"expected {OBS_LAYOUT!r}, got {layout!r}"
    )
    a_max = doc.get("a_max")
    _require(
        isinstance(a_max, (int, float)) and not isinstance(a_max, bool),
        "a_max",
        f"expected a real, got {a_max!r}",
    )
    a_max = float(a_max)
    _require(math.isfinite(a_max) and a_max >= 0.0, "a_max", f"must be a finite real >= 0, got {a_max}")

    raw_layers = doc.get("layers")
    _require(
        isinstance(raw_layers, list) and len(raw_layers) > 0,
        "layers",
        "expected a non-empty array",
    )
    assert isinstance(raw_layers, list)

    layers: list[Layer] = []
    expected_cols = OBS_DIM
    for i, raw in enumerate(raw_layers):
        path = f"layers[{i}]"
        _require(isinstance(raw, dict), path, "expected an object")
        rows = _positive_int(raw.get("rows"), f"{path}.rows")
        cols = _positive_int(raw.get("cols"), f"{path}.cols")
        _require(
            cols == expected_cols,
            f"{path}.cols",
            f"expected {expected_cols} to chain with the previous layer, got {cols}",
        )
        weights = _finite_array(raw.get("weights"), f"{path}.weights", rows * cols)
        bias = _finite_array(raw.get("bias"), f"{path}.bias", rows)
        act_name = raw.get("activation")
        try:
            activation = Activation(act_name)
        except ValueError:
            raise WeightFileError(
                f"{path}.activation: expected one of "
                f"{[a.value for a in Activation]}, got {act_name!r}"
            ) from None
        w = weights.reshape(rows, cols)
        w.flags.writeable = False
        bias.flags.writeable = False
        layers.append(Layer(w, bias, activation))
        expected_cols = rows
    _require(
        expected_cols == ACT_DIM,
        f"layers[{len(layers) - 1}].rows",
        f"final layer must output {ACT_DIM} components, got {expected_cols}",
    )
    return MlpNet(tuple(layers), OBS_DIM, ACT_DIM, a_max)


def save_policy(net: MlpNet) -> bytes:
    """Serialize `net` so that load_policy(save_policy(net)) reproduces the
    exact same weight values (floats are written in full precision)."""
    doc = {
        "format_version": FORMAT_VERSION,
        "obs_dim": net.obs_dim,
        "act_dim": net.act_dim,
        "a_max": net.a_max,
        "obs_layout": OBS_LAYOUT,
        "layers": [
            {
                "rows": layer.rows,
                "cols": layer.cols,
                "weights": layer.weights.reshape(-1).tolist(),
                "bias": layer.bias.tolist(),
                "activation": layer.activation.value,
            }
            for layer in net.layers
        ],
    }
    return json.dumps(doc, indent=2).encode("utf-8")


def forward(net: MlpNet, obs: Sequence[float]) -> Vec2:
    """Run the network on one observation and return a bounded acceleration.

    The raw 2-component output is scaled by the actor's a_max and then
    norm-clamped, so the result never exceeds the acceleration budget even
    for corner outputs like (1, 1) from a tanh head.
    """
    if len(obs) != net.obs_dim:
        raise ShapeError(f"expected {net.obs_dim} observation slots, got {len(obs)}")
    v = np.asarray(obs, dtype=np.float64)
    for layer in net.layers:
        v = layer.activation.apply(layer.weights @ v + layer.bias)
    raw = Vec2(float(v[0]) * net.a_max, float(v[1]) * net.a_max)
    return clamp_acceleration(raw, net.a_max)
