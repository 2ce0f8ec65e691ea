"""
Main Module

Command-line entry point: `polyion --species S --trap T --experiment E --seed N`.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from .runner import EXPERIMENTS, RunConfig, run

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polyion",
        description="Rotational-state readout and preparation of a trapped molecular ion "
                    "by state-dependent lattice heating.")
    parser.add_argument("--species", type=Path, required=True, help="species JSON file")
    parser.add_argument("--trap", type=Path, required=True, help="trap/lattice JSON file")
    parser.add_argument("--experiment", required=True,
                        help=f"one of: {', '.join(EXPERIMENTS)}")
    parser.add_argument("--seed", type=int, required=True, help="master seed, 0 <= seed < 2**64")
    parser.add_argument("--out", type=Path, default=Path("out"), help="output directory")
    parser.add_argument("--set", dest="overrides", action="append", default=[],
                        metavar="KEY=VALUE",
                        help="override a config value, e.g. heating.n_traj=10 or "
                             "species.B_GHz=3.1; repeatable")
    parser.add_argument("--log-level", default="WARNING", choices=LOG_LEVELS,
                        help="logging threshold (default WARNING)")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=getattr(logging, args.log_level),
                        format="%(levelname)s %(name)s: %(message)s")
    config = RunConfig(species=args.species, trap=args.trap, experiment=args.experiment,
                       seed=args.seed, out=args.out, overrides=tuple(args.overrides))
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
