"""Command line entry: train a policy pair and write the artifacts."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import torch

from .config import TrainConfig
from .errors import TrainerError
from .maddpg import MaddpgTrainer, write_reward_csv

# The two evaluation settings: equal pursuer budget, evader at the
# capture-regime and escape-regime budgets respectively.
PRESETS = {
    "case1": {"a_p_max": 4.0, "a_e_max": 2.0},
    "case2": {"a_p_max": 4.0, "a_e_max": 2.4},
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="maddpg-train",
        description="Train pursuer and evader policies and export them "
        "as portable weight files.",
    )
    parser.add_argument("--preset", choices=sorted(PRESETS), required=True)
    parser.add_argument("--episodes", type=int, default=5000)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--gamma", type=float, default=0.95)
    parser.add_argument(
        "--scripted-pursuer-mix",
        type=float,
        default=0.0,
        metavar="P",
        help="probability an episode's pursuer plays the scripted chase law",
    )
    parser.add_argument("--out", required=True, metavar="DIR")
    parser.add_argument("--progress-every", type=int, default=100)
    parser.add_argument(
        "--snapshot-every",
        type=int,
        default=0,
        metavar="N",
        help="export the actor pair to DIR/snapshots/epNNNNN every N episodes",
    )
    parser.add_argument("--threads", type=int, default=2)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    torch.set_num_threads(max(1, args.threads))
    config = TrainConfig(
        episodes=args.episodes,
        seed=args.seed,
        gamma=args.gamma,
        scripted_pursuer_mix=args.scripted_pursuer_mix,
        **PRESETS[args.preset],
    )
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "config.json").write_text(config.to_json() + "\n", encoding="utf-8")
    trainer = MaddpgTrainer(config, out_dir)
    try:
        log = trainer.train(
            progress_every=args.progress_every,
            snapshot_every=args.snapshot_every,
        )
    except TrainerError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    write_reward_csv(log, out_dir / "rewards.csv")
    print(
        f"trained {log.episodes} episodes,"
        f" converged={'yes' if log.converged else 'no'},"
        f" artifacts in {out_dir}"
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
