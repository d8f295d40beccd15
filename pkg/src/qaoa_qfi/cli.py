"""Command line entry point: ``qaoa-qfi {qfi-scan,ent-study,qim-bench}``."""
from __future__ import annotations

import argparse
import logging
import sys

from . import harness
from .errors import QaoaQfiError

COMMANDS = {"qfi-scan": "qfi-scan", "ent-study": "ent-stage-study", "qim-bench": "qim-bench"}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qaoa-qfi", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="JSON experiment config; flags override its values")
        p.add_argument("--seed", type=int)
        p.add_argument("--samples", type=int, dest="n_samples", help="QFI parameter draws per point")
        p.add_argument("--out", dest="output_dir")
        p.add_argument("--jobs", type=int, help="worker processes")
        p.add_argument("-v", "--verbose", action="store_true")
        if name == "qim-bench":
            p.add_argument("--runs", type=int)
            p.add_argument("--iters", type=int, dest="iterations")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    overrides = {
        "mode": COMMANDS[args.command],
        "seed": args.seed,
        "n_samples": args.n_samples,
        "output_dir": args.output_dir,
        "jobs": args.jobs,
        "runs": getattr(args, "runs", None),
        "iterations": getattr(args, "iterations", None),
    }
    try:
        cfg = harness.load_config(args.config, **overrides)
        _, failed = harness.run(cfg)
    except (QaoaQfiError, OSError, ValueError) as exc:
        logging.getLogger("qaoa_qfi").error("%s", exc)
        return 2
    return 0 if failed == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
