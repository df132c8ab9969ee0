"""Command-line front end.

Four subcommands:

* ``simulate`` -- run one episode, write the trajectory CSV (and optionally
  an SVG of both paths), print the outcome;
* ``sweep`` -- map capture/escape over the (a_e, a_p) plane, write the zone
  CSV and SVG, fit and print the phase-transition line;
* ``fit`` -- redo boundary extraction and the line fit on an existing zone
  CSV;
* ``golden`` -- emit the pinned cross-component parity fixture.

Exit codes: 0 success, 1 runtime failure, 2 usage error. Every output file
gets a sibling ``<out>.manifest.json`` recording the resolved parameters.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import time
from pathlib import Path

from .dynamics import Scheme, WorldParams
from .episode import EpisodeConfig, Outcome, run_episode, write_trajectory_csv
from .errors import SimulationError
from .golden import fixture_json
from .manifest import build_manifest, write_manifest
from .mlp import load_policy
from .strategies import Policy
from .svgplot import trajectory_svg, zone_svg
from .vec import Vec2
from .zonemap import (
    DEFAULT_AE_MAX,
    DEFAULT_AE_MIN,
    DEFAULT_AE_STEP,
    DEFAULT_AP_MAX,
    DEFAULT_AP_MIN,
    DEFAULT_AP_STEP,
    DEFAULT_ZONE_C,
    DEFAULT_ZONE_X_P0,
    GridSpec,
    boundary_from_outcomes,
    extract_boundary,
    fit_phase_line,
    fit_summary,
    read_zone_csv,
    sweep,
    zone_csv_rows,
)


def _finite_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"must be finite, got {text!r}")
    return v


def _nonneg_float(text: str) -> float:
    v = _finite_float(text)
    if v < 0.0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text!r}")
    return v


def _positive_float(text: str) -> float:
    v = _finite_float(text)
    if v <= 0.0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {text!r}")
    return v


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v <= 0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {text!r}")
    return v


def _vec2(text: str) -> Vec2:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected 'x,y', got {text!r}")
    try:
        return Vec2(float(parts[0]), float(parts[1]))
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"bad vector {text!r}: {e}") from None


def _policy_spec(text: str) -> tuple[str, str | None]:
    if text == "baseline":
        return ("baseline", None)
    if text.startswith("mlp:") and len(text) > 4:
        return ("mlp", text[4:])
    raise argparse.ArgumentTypeError(
        f"expected 'baseline' or 'mlp:PATH', got {text!r}"
    )


def _scheme(text: str) -> Scheme:
    try:
        return Scheme(text)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected 'exact' or 'euler', got {text!r}"
        ) from None


def _add_world_flags(sp: argparse.ArgumentParser, c_default: float) -> None:
    sp.add_argument("--mu", type=_nonneg_float, default=0.5,
                    help="velocity damping coefficient (default 0.5)")
    sp.add_argument("--eps", type=_positive_float, default=0.5,
                    help="capture radius in meters (default 0.5)")
    sp.add_argument("--dt", type=_positive_float, default=0.01,
                    help="integration step in seconds (default 0.01)")
    sp.add_argument("--tmax", type=_positive_float, default=20.0,
                    help="episode horizon in seconds (default 20)")
    sp.add_argument("--scheme", type=_scheme, default=Scheme.EXACT_EXPONENTIAL,
                    help="integration scheme: exact or euler (default exact)")
    sp.add_argument("--c", type=_nonneg_float, default=c_default,
                    help="evader critical turning distance in meters "
                         f"(default {c_default})")
    sp.add_argument("--pursuer", type=_policy_spec, default=("baseline", None),
                    metavar="SPEC", help="'baseline' or 'mlp:PATH' (default baseline)")
    sp.add_argument("--evader", type=_policy_spec, default=("baseline", None),
                    metavar="SPEC", help="'baseline' or 'mlp:PATH' (default baseline)")
    sp.add_argument("--seed", type=int, default=0,
                    help="recorded in the config for reproducibility (default 0)")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pesim",
        description="Deterministic planar pursuit-evasion simulation engine.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run one episode")
    _add_world_flags(sim, c_default=2.4)
    sim.add_argument("--ap", type=_nonneg_float, default=4.0,
                     help="pursuer max acceleration (default 4)")
    sim.add_argument("--ae", type=_nonneg_float, default=2.0,
                     help="evader max acceleration (default 2)")
    sim.add_argument("--xp0", type=_vec2, default=Vec2(0.0, -4.0),
                     metavar="X,Y", help="pursuer start (default 0,-4)")
    sim.add_argument("--xe0", type=_vec2, default=Vec2(0.0, 0.0),
                     metavar="X,Y", help="evader start (default 0,0)")
    sim.add_argument("--vp0", type=_vec2, default=Vec2(0.0, 0.0),
                     metavar="X,Y", help="pursuer initial velocity (default 0,0)")
    sim.add_argument("--ve0", type=_vec2, default=Vec2(0.0, 0.0),
                     metavar="X,Y", help="evader initial velocity (default 0,0)")
    sim.add_argument("--out", default="trajectory.csv",
                     help="trajectory CSV path (default trajectory.csv)")
    sim.add_argument("--svg", default=None, help="optional trajectory SVG path")
    sim.set_defaults(func=cmd_simulate, parser=sim)

    sw = sub.add_parser("sweep", help="map capture/escape over (a_e, a_p)")
    _add_world_flags(sw, c_default=DEFAULT_ZONE_C)
    sw.add_argument("--xp0", type=_vec2, default=DEFAULT_ZONE_X_P0,
                    metavar="X,Y", help="pursuer start (default 0,-12)")
    sw.add_argument("--xe0", type=_vec2, default=Vec2(0.0, 0.0),
                    metavar="X,Y", help="evader start (default 0,0)")
    sw.add_argument("--ae-min", type=_positive_float, default=DEFAULT_AE_MIN)
    sw.add_argument("--ae-max", type=_positive_float, default=DEFAULT_AE_MAX)
    sw.add_argument("--ae-step", type=_positive_float, default=DEFAULT_AE_STEP)
    sw.add_argument("--ap-min", type=_positive_float, default=DEFAULT_AP_MIN)
    sw.add_argument("--ap-max", type=_positive_float, default=DEFAULT_AP_MAX)
    sw.add_argument("--ap-step", type=_positive_float, default=DEFAULT_AP_STEP)
    sw.add_argument("--workers", type=_positive_int, default=os.cpu_count() or 1,
                    help="parallel episode workers (default: machine parallelism)")
    sw.add_argument("--out", default="zones.csv",
                    help="zone CSV path (default zones.csv)")
    sw.add_argument("--svg", default=None, help="optional zone map SVG path")
    sw.add_argument("--fit-out", default=None,
                    help="optional path for the fit summary text")
    sw.set_defaults(func=cmd_sweep, parser=sw)

    ft = sub.add_parser("fit", help="refit the phase line from a zone CSV")
    ft.add_argument("csv", help="zone CSV produced by sweep")
    ft.add_argument("--out", default=None,
                    help="optional path for the fit summary text")
    ft.set_defaults(func=cmd_fit, parser=ft)

    gd = sub.add_parser("golden", help="emit the cross-component parity fixture")
    gd.add_argument("--out", default="golden.json",
                    help="fixture path (default golden.json)")
    gd.set_defaults(func=cmd_golden, parser=gd)

    return parser


def _resolve_policy(
    spec: tuple[str, str | None],
    role: str,
    a_max: float,
    c: float,
    inputs: dict[str, str],
) -> Policy:
    kind, path = spec
    if kind == "baseline":
        if role == "pursuer":
            return Policy.pursuit(a_max)
        return Policy.evasion(a_max, c)
    assert path is not None
    net = load_policy(Path(path).read_bytes())
    inputs[f"{role}_weights"] = path
    return Policy.from_net(net)


def _policy_param(spec: tuple[str, str | None]) -> str:
    kind, path = spec
    return kind if path is None else f"{kind}:{path}"


def cmd_simulate(args: argparse.Namespace) -> int:
    t0 = time.perf_counter()
    world = WorldParams(args.mu, args.eps, args.dt, args.tmax, args.scheme)
    inputs: dict[str, str] = {}
    pursuer = _resolve_policy(args.pursuer, "pursuer", args.ap, 0.0, inputs)
    evader = _resolve_policy(args.evader, "evader", args.ae, args.c, inputs)
    config = EpisodeConfig(
        world, pursuer, evader, args.xp0, args.xe0, args.vp0, args.ve0, args.seed
    )
    result = run_episode(config)

    outputs = [args.out]
    with open(args.out, "w", encoding="utf-8") as f:
        write_trajectory_csv(result, f)
    if args.svg:
        Path(args.svg).write_text(trajectory_svg(result, config), encoding="utf-8")
        outputs.append(args.svg)

    if result.outcome is Outcome.CAPTURED:
        print(f"captured t={result.capture_time:.9g}")
    else:
        print("escaped")

    parameters = {
        "mu": args.mu, "eps": args.eps, "dt": args.dt, "tmax": args.tmax,
        "scheme": args.scheme.value, "ap": args.ap, "ae": args.ae, "c": args.c,
        "xp0": [args.xp0.x, args.xp0.y], "xe0": [args.xe0.x, args.xe0.y],
        "vp0": [args.vp0.x, args.vp0.y], "ve0": [args.ve0.x, args.ve0.y],
        "pursuer": _policy_param(args.pursuer),
        "evader": _policy_param(args.evader),
        "seed": args.seed,
    }
    write_manifest(
        args.out,
        build_manifest("simulate", parameters, outputs,
                       time.perf_counter() - t0, inputs),
    )
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    t0 = time.perf_counter()
    world = WorldParams(args.mu, args.eps, args.dt, args.tmax, args.scheme)
    inputs: dict[str, str] = {}
    # Per-cell budgets overwrite these placeholders.
    pursuer = _resolve_policy(args.pursuer, "pursuer", 1.0, 0.0, inputs)
    evader = _resolve_policy(args.evader, "evader", 1.0, args.c, inputs)
    template = EpisodeConfig(
        world, pursuer, evader, args.xp0, args.xe0, seed=args.seed
    )
    try:
        spec = GridSpec(
            args.ae_min, args.ae_max, args.ae_step,
            args.ap_min, args.ap_max, args.ap_step,
            template,
        )
    except ValueError as e:
        args.parser.error(str(e))

    grid = sweep(spec, workers=args.workers)
    outputs = [args.out]
    with open(args.out, "w", encoding="utf-8") as f:
        for line in zone_csv_rows(grid):
            f.write(line + "\n")

    boundary = extract_boundary(grid)
    fit = fit_phase_line(boundary.points)
    summary = fit_summary(fit, boundary)
    print(summary, end="")
    if args.fit_out:
        Path(args.fit_out).write_text(summary, encoding="utf-8")
        outputs.append(args.fit_out)
    if args.svg:
        Path(args.svg).write_text(zone_svg(grid, fit), encoding="utf-8")
        outputs.append(args.svg)

    parameters = {
        "mu": args.mu, "eps": args.eps, "dt": args.dt, "tmax": args.tmax,
        "scheme": args.scheme.value, "c": args.c,
        "xp0": [args.xp0.x, args.xp0.y], "xe0": [args.xe0.x, args.xe0.y],
        "ae_min": args.ae_min, "ae_max": args.ae_max, "ae_step": args.ae_step,
        "ap_min": args.ap_min, "ap_max": args.ap_max, "ap_step": args.ap_step,
        "pursuer": _policy_param(args.pursuer),
        "evader": _policy_param(args.evader),
        "workers": args.workers, "seed": args.seed,
    }
    write_manifest(
        args.out,
        build_manifest("sweep", parameters, outputs,
                       time.perf_counter() - t0, inputs),
    )
    return 0


def cmd_fit(args: argparse.Namespace) -> int:
    t0 = time.perf_counter()
    text = Path(args.csv).read_text(encoding="utf-8")
    ae_values, ap_values, outcomes = read_zone_csv(text)
    boundary = boundary_from_outcomes(ae_values, ap_values, outcomes)
    fit = fit_phase_line(boundary.points)
    summary = fit_summary(fit, boundary)
    print(summary, end="")
    if args.out:
        Path(args.out).write_text(summary, encoding="utf-8")
        write_manifest(
            args.out,
            build_manifest("fit", {"csv": args.csv}, [args.out],
                           time.perf_counter() - t0, {"zone_csv": args.csv}),
        )
    return 0


def cmd_golden(args: argparse.Namespace) -> int:
    t0 = time.perf_counter()
    Path(args.out).write_bytes(fixture_json())
    write_manifest(
        args.out,
        build_manifest("golden", {}, [args.out], time.perf_counter() - t0),
    )
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SimulationError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
