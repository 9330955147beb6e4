"""Command-line front end: ``ahv verify <campaign> [options]``.

Exit status: 0 when no record failed, 1 on any failure, 2 on bad configuration.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from .campaigns import CAMPAIGNS, DEFAULT_TOLERANCES, CampaignConfig, run
from .errors import ConfigError

SEED_ENV = "AHV_SEED"


def _range(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"range must be 'lo,hi' (got {text!r})") from None
    return lo, hi


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 42
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{SEED_ENV}={raw!r} is not an integer") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ahv", description="Numerical verification campaigns for "
                                "affine field algebras and their orbit hypersurfaces.")
    sub = p.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", help="run a campaign and write a report")
    v.add_argument("campaign", choices=CAMPAIGNS + ("all",))
    v.add_argument("--family", default="all", help="family ids, comma separated, or 'all'")
    v.add_argument("--surface", default="all", help="surface ids, comma separated, or 'all'")
    v.add_argument("--theorem", default="all", help="4.1 ... 4.7 or 'all'")
    v.add_argument("--samples", type=int, default=100, help="draws / sample points (default 100)")
    v.add_argument("--seed", type=int, default=None, help=f"default from ${SEED_ENV}, else 42")
    v.add_argument("--range", type=_range, default=(-2.0, 2.0), dest="range_",
                   help="parameter range 'lo,hi' (default -2,2)")
    v.add_argument("--out", default=None, help="report path (default: stdout)")
    for name in DEFAULT_TOLERANCES:
        v.add_argument(f"--tol-{name}", type=float, default=None, dest=f"tol_{name}",
                       help=f"override the {name} tolerance")
    return p


def config_from_args(args) -> CampaignConfig:
    tols = {n: getattr(args, f"tol_{n}") for n in DEFAULT_TOLERANCES
            if getattr(args, f"tol_{n}") is not None}
    seed = args.seed if args.seed is not None else _default_seed()
    return CampaignConfig(args.campaign, seed, args.samples, tuple(args.range_), args.family,
                          args.surface, args.theorem, tols, args.out)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    try:
        cfg = config_from_args(args)
    except ConfigError as e:
        print(f"ahv: configuration error: {e}", file=sys.stderr)
        return 2
    report, timings = run(cfg)
    text = report.canonical()
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
        with open(cfg.out + ".timings.json", "w") as fh:
            json.dump({k: round(v, 6) for k, v in timings.items()}, fh, indent=2)
    else:
        sys.stdout.write(text)
    s = report.summary()
    print(f"ahv: {s['total']} checks, {s['passed']} passed, {s['failed']} failed, "
          f"{s['inconclusive']} inconclusive", file=sys.stderr)
    return 1 if s["failed"] else 0


if __name__ == "__main__":
    sys.exit(main())
