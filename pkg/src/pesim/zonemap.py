"""Sweep the (a_e, a_p) acceleration plane and fit the phase-transition line.

Every grid cell re-runs the template episode with the pursuer's and evader's
acceleration budgets replaced by the cell coordinates, producing a
capture/escape zone map. A phase boundary is then read off per a_e column
(the smallest a_p whose entire column suffix is captured) and summarized by
an ordinary least-squares line a_p* = slope * a_e + intercept.

Cells are independent, so the sweep distributes over a process pool;
aggregation is by grid index, making the result bit-identical for any
worker count.
"""

from __future__ import annotations

import math
import multiprocessing
from dataclasses import dataclass, replace
from typing import Iterable

import numpy as np

from .dynamics import Scheme, WorldParams
from .episode import EpisodeConfig, Outcome, run_episode
from .errors import (
    CsvFormatError,
    DegenerateFitError,
    NoBoundaryError,
    SimulationError,
    SweepCellError,
)
from .strategies import Policy, PolicyKind
from .vec import Vec2

# Default sweep window and episode template. The window brackets both the
# baseline and the learned phase lines with margin on every side; the
# template pins the wide-gap start used for zone mapping (pursuer 12 m below
# the evader, critical turning distance 3 m, 20 s horizon).
DEFAULT_AE_MIN = 0.5
DEFAULT_AE_MAX = 5.0
DEFAULT_AE_STEP = 0.25
DEFAULT_AP_MIN = 0.5
DEFAULT_AP_MAX = 7.0
DEFAULT_AP_STEP = 0.25

DEFAULT_ZONE_MU = 0.5
DEFAULT_ZONE_EPS = 0.5
DEFAULT_ZONE_T_MAX = 20.0
DEFAULT_ZONE_X_P0 = Vec2(0.0, -12.0)
DEFAULT_ZONE_X_E0 = Vec2(0.0, 0.0)
DEFAULT_ZONE_C = 3.0

ZONE_CSV_HEADER = "ae,ap,outcome,capture_time"


def _axis_count(lo: float, hi: float, step: float) -> int:
    return int(math.floor((hi - lo) / step + 1e-9)) + 1


@dataclass(frozen=True, slots=True)
class GridSpec:
    """Sweep window plus the episode template the cells are stamped from."""

    ae_min: float
    ae_max: float
    ae_step: float
    ap_min: float
    ap_max: float
    ap_step: float
    template: EpisodeConfig

    def __post_init__(self) -> None:
        for name, step in (("ae_step", self.ae_step), ("ap_step", self.ap_step)):
            if step <= 0.0:
                raise ValueError(f"{name} must be > 0, got {step}")
        if self.ae_min >= self.ae_max:
            raise ValueError(f"ae range empty: [{self.ae_min}, {self.ae_max}]")
        if self.ap_min >= self.ap_max:
            raise ValueError(f"ap range empty: [{self.ap_min}, {self.ap_max}]")
        if self.n_ae < 2 or self.n_ap < 2:
            raise ValueError(
                f"grid must be at least 2x2, got {self.n_ap}x{self.n_ae}"
            )

    @property
    def n_ae(self) -> int:
        return _axis_count(self.ae_min, self.ae_max, self.ae_step)

    @property
    def n_ap(self) -> int:
        return _axis_count(self.ap_min, self.ap_max, self.ap_step)

    @property
    def ae_values(self) -> tuple[float, ...]:
        return tuple(self.ae_min + k * self.ae_step for k in range(self.n_ae))

    @property
    def ap_values(self) -> tuple[float, ...]:
        return tuple(self.ap_min + k * self.ap_step for k in range(self.n_ap))


@dataclass(frozen=True, slots=True)
class ZoneGrid:
    """Outcome matrix indexed [a_p row][a_e column], ascending both axes."""

    spec: GridSpec
    outcomes: tuple[tuple[Outcome, ...], ...]
    capture_times: tuple[tuple[float | None, ...], ...]

    def __post_init__(self) -> None:
        n_ap, n_ae = self.spec.n_ap, self.spec.n_ae
        if len(self.outcomes) != n_ap or len(self.capture_times) != n_ap:
            raise ValueError("matrix row count does not match the grid spec")
        t_max = self.spec.template.world.t_max
        for out_row, time_row in zip(self.outcomes, self.capture_times):
            if len(out_row) != n_ae or len(time_row) != n_ae:
                raise ValueError("matrix column count does not match the grid spec")
            for outcome, t in zip(out_row, time_row):
                if outcome is Outcome.CAPTURED:
                    if t is None or t > t_max:
                        raise ValueError(f"captured cell with capture_time {t}")
                elif t is not None:
                    raise ValueError("escaped cell with a capture_time")


@dataclass(frozen=True, slots=True)
class BoundaryResult:
    """Phase-boundary points plus the columns that could not contribute."""

    points: tuple[tuple[float, float], ...]
    excluded: tuple[tuple[float, str], ...]
    anomalies: tuple[str, ...]


@dataclass(frozen=True, slots=True)
class LineFit:
    slope: float
    intercept: float
    boundary_points: tuple[tuple[float, float], ...]
    residual_rms: float


def default_zone_template(
    pursuer: Policy,
    evader: Policy,
    dt: float = 0.01,
    scheme: Scheme = Scheme.EXACT_EXPONENTIAL,
) -> EpisodeConfig:
    """Zone-mapping episode template: wide-gap start, 20 s horizon."""
    world = WorldParams(
        mu=DEFAULT_ZONE_MU,
        eps=DEFAULT_ZONE_EPS,
        dt=dt,
        t_max=DEFAULT_ZONE_T_MAX,
        scheme=scheme,
    )
    return EpisodeConfig(
        world=world,
        pursuer=pursuer,
        evader=evader,
        x_p0=DEFAULT_ZONE_X_P0,
        x_e0=DEFAULT_ZONE_X_E0,
    )


def default_grid(template: EpisodeConfig) -> GridSpec:
    return GridSpec(
        DEFAULT_AE_MIN,
        DEFAULT_AE_MAX,
        DEFAULT_AE_STEP,
        DEFAULT_AP_MIN,
        DEFAULT_AP_MAX,
        DEFAULT_AP_STEP,
        template,
    )


def _with_a_max(policy: Policy, a_max: float) -> Policy:
    if policy.kind is PolicyKind.MLP:
        assert policy.net is not None
        # Rescaling the network's output budget sweeps the same learned
        # direction field across acceleration limits.
        return Policy.from_net(replace(policy.net, a_max=a_max))
    return replace(policy, a_max=a_max)


def cell_config(spec: GridSpec, i_ap: int, j_ae: int) -> EpisodeConfig:
    """The template stamped with the acceleration budgets of cell (i, j)."""
    ap = spec.ap_min + i_ap * spec.ap_step
    ae = spec.ae_min + j_ae * spec.ae_step
    return replace(
        spec.template,
        pursuer=_with_a_max(spec.template.pursuer, ap),
        evader=_with_a_max(spec.template.evader, ae),
    )


def _run_cell(spec: GridSpec, i: int, j: int) -> tuple[int, int, Outcome, float | None]:
    try:
        result = run_episode(cell_config(spec, i, j))
    except (SimulationError, ValueError) as e:
        ap = spec.ap_min + i * spec.ap_step
        ae = spec.ae_min + j * spec.ae_step
        raise SweepCellError(f"cell a_e={ae}, a_p={ap} (row {i}, col {j}): {e}") from e
    return i, j, result.outcome, result.capture_time


_WORKER_SPEC: GridSpec | None = None


def _init_worker(spec: GridSpec) -> None:
    global _WORKER_SPEC
    _WORKER_SPEC = spec


def _run_cell_in_worker(idx: tuple[int, int]) -> tuple[int, int, Outcome, float | None]:
    assert _WORKER_SPEC is not None
    return _run_cell(_WORKER_SPEC, idx[0], idx[1])


def sweep(spec: GridSpec, workers: int = 1) -> ZoneGrid:
    """Run every grid cell and assemble the zone map.

    With workers > 1 the cells are distributed over a process pool; the
    matrices are filled by cell index, so the output is identical for any
    worker count and completion order.
    """
    n_ap, n_ae = spec.n_ap, spec.n_ae
    indices = [(i, j) for i in range(n_ap) for j in range(n_ae)]
    if workers <= 1:
        cells = [_run_cell(spec, i, j) for i, j in indices]
    else:
        chunk = max(1, len(indices) // (workers * 4))
        with multiprocessing.Pool(
            processes=workers, initializer=_init_worker, initargs=(spec,)
        ) as pool:
            cells = pool.map(_run_cell_in_worker, indices, chunksize=chunk)

    outcomes: list[list[Outcome | None]] = [[None] * n_ae for _ in range(n_ap)]
    times: list[list[float | None]] = [[None] * n_ae for _ in range(n_ap)]
    for i, j, outcome, capture_time in cells:
        outcomes[i][j] = outcome
        times[i][j] = capture_time
    assert all(o is not None for row in outcomes for o in row)
    return ZoneGrid(
        spec=spec,
        outcomes=tuple(tuple(row) for row in outcomes),  # type: ignore[arg-type]
        capture_times=tuple(tuple(row) for row in times),
    )


def extract_boundary(grid: ZoneGrid) -> BoundaryResult:
    """Read the phase boundary off the zone map, one point per a_e column.

    A column contributes the smallest a_p whose suffix (that a_p and
    everything above it) is entirely captured. Columns captured everywhere
    or nowhere near the top say nothing about where the line crosses them
    and are excluded; captured islands below the suffix are reported as
    anomalies but do not move the boundary.
    """
    return boundary_from_outcomes(
        grid.spec.ae_values, grid.spec.ap_values, grid.outcomes
    )


def boundary_from_outcomes(
    ae_values: tuple[float, ...],
    ap_values: tuple[float, ...],
    outcomes: tuple[tuple[Outcome, ...], ...],
) -> BoundaryResult:
    """Boundary extraction on bare axes and outcomes (outcomes[i_ap][j_ae]).

    Used both on live ZoneGrids and on zone CSVs re-read from disk.
    """
    n_ap = len(ap_values)
    points: list[tuple[float, float]] = []
    excluded: list[tuple[float, str]] = []
    anomalies: list[str] = []
    for j, ae in enumerate(ae_values):
        column = [outcomes[i][j] for i in range(n_ap)]
        k = n_ap
        while k > 0 and column[k - 1] is Outcome.CAPTURED:
            k -= 1
        islands = [ap_values[i] for i in range(k) if column[i] is Outcome.CAPTURED]
        if islands:
            anomalies.append(
                f"a_e={ae:g}: captured below the boundary at a_p="
                + ",".join(f"{ap:g}" for ap in islands)
            )
        if k == n_ap:
            excluded.append((ae, "no captured suffix"))
        elif k == 0:
            excluded.append((ae, "fully captured"))
        else:
            points.append((ae, ap_values[k]))
    if len(points) < 2:
        raise NoBoundaryError(
            f"only {len(points)} usable columns, need at least 2 "
            f"({len(excluded)} excluded)"
        )
    return BoundaryResult(tuple(points), tuple(excluded), tuple(anomalies))


def fit_phase_line(points: Iterable[tuple[float, float]]) -> LineFit:
    """Ordinary least squares a_p* = slope * a_e + intercept."""
    pts = tuple(points)
    if len(pts) < 2:
        raise DegenerateFitError(f"need at least 2 points, got {len(pts)}")
    ae = np.array([p[0] for p in pts], dtype=np.float64)
    ap = np.array([p[1] for p in pts], dtype=np.float64)
    dx = ae - ae.mean()
    sxx = float(dx @ dx)
    if sxx == 0.0:
        raise DegenerateFitError("all a_e values are equal")
    slope = float(dx @ (ap - ap.mean())) / sxx
    intercept = float(ap.mean()) - slope * float(ae.mean())
    residuals = ap - (slope * ae + intercept)
    rms = float(np.sqrt(np.mean(residuals * residuals)))
    return LineFit(slope, intercept, pts, rms)


def zone_csv_rows(grid: ZoneGrid) -> Iterable[str]:
    yield ZONE_CSV_HEADER
    spec = grid.spec
    for j, ae in enumerate(spec.ae_values):
        for i, ap in enumerate(spec.ap_values):
            t = grid.capture_times[i][j]
            time_field = "" if t is None else f"{t:.9g}"
            yield f"{ae:.9g},{ap:.9g},{grid.outcomes[i][j].value},{time_field}"


def read_zone_csv(
    text: str,
) -> tuple[tuple[float, ...], tuple[float, ...], tuple[tuple[Outcome, ...], ...]]:
    """Parse a zone CSV back into axes and an outcome matrix.

    The grid is reconstructed from the cell coordinates present in the file;
    it must be complete (every (a_e, a_p) combination exactly once). Errors
    carry the 1-based line number of the offending row.
    """
    rows = text.splitlines()
    cells: dict[tuple[float, float], Outcome] = {}
    start = 0
    if rows and rows[0].strip() == ZONE_CSV_HEADER:
        start = 1
    for lineno, line in enumerate(rows[start:], start=start + 1):
        if not line.strip():
            continue
        fields = line.split(",")
        if len(fields) != 4:
            raise CsvFormatError(
                f"line {lineno}: expected 4 fields, got {len(fields)}"
            )
        try:
            ae, ap = float(fields[0]), float(fields[1])
        except ValueError:
            raise CsvFormatError(
                f"line {lineno}: bad coordinates {fields[0]!r},{fields[1]!r}"
            ) from None
        try:
            outcome = Outcome(fields[2])
        except ValueError:
            raise CsvFormatError(
                f"line {lineno}: unknown outcome {fields[2]!r}"
            ) from None
        if fields[3].strip():
            try:
                float(fields[3])
            except ValueError:
                raise CsvFormatError(
                    f"line {lineno}: bad capture_time {fields[3]!r}"
                ) from None
        if (ae, ap) in cells:
            raise CsvFormatError(f"line {lineno}: duplicate cell ae={ae}, ap={ap}")
        cells[(ae, ap)] = outcome

    ae_values = tuple(sorted({ae for ae, _ in cells}))
    ap_values = tuple(sorted({ap for _, ap in cells}))
    missing = [
        (ae, ap) for ae in ae_values for ap in ap_values if (ae, ap) not in cells
    ]
    if missing:
        raise CsvFormatError(
            f"incomplete grid: {len(missing)} of "
            f"{len(ae_values) * len(ap_values)} cells missing "
            f"(first: ae={missing[0][0]}, ap={missing[0][1]})"
        )
    outcomes = tuple(
        tuple(cells[(ae, ap)] for ae in ae_values) for ap in ap_values
    )
    return ae_values, ap_values, outcomes


def fit_summary(fit: LineFit, boundary: BoundaryResult) -> str:
    lines = [
        f"slope: {fit.slope:.9g}",
        f"intercept: {fit.intercept:.9g}",
        f"residual_rms: {fit.residual_rms:.9g}",
        f"points: {len(fit.boundary_points)}",
        f"excluded_columns: {len(boundary.excluded)}",
    ]
    for ae, reason in boundary.excluded:
        lines.append(f"  excluded a_e={ae:g}: {reason}")
    lines.append(f"anomalies: {len(boundary.anomalies)}")
    for note in boundary.anomalies:
        lines.append(f"  {note}")
    return "\n".join(lines) + "\n"
