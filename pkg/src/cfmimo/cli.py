"""Command-line front end: ``cfmimo simulate`` and ``cfmimo summarize``."""

from __future__ import annotations

import argparse
import sys

from .runner import format_summary, plan_from_scenario, run_experiment, summarize
from .scenario import load_config

IMPAIRMENT_NAMES = ("lna", "pn", "iqi", "adc")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cfmimo",
        description="Cell-free massive MIMO-OFDM uplink simulator with "
                    "behavioral hardware impairments.")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a Monte-Carlo experiment")
    sim.add_argument("--config", required=True, help="JSON scenario config")
    sim.add_argument("--drops", type=int, help="override number of network drops")
    sim.add_argument("--realizations", type=int,
                     help="override channel realizations per drop")
    sim.add_argument("--bussgang-samples", type=int,
                     help="override chain runs per statistics estimate")
    sim.add_argument("--combiners", default="aware,unaware,perfect",
                     help="comma list out of aware,unaware,perfect")
    sim.add_argument("--disable", action="append", choices=IMPAIRMENT_NAMES,
                     default=[], metavar="IMPAIRMENT",
                     help="add a single-impairment ablation (repeatable); "
                          "the all-impairments baseline is always included")
    sim.add_argument("--seed", type=int, help="override the master seed")
    sim.add_argument("--out", default="results", help="output directory")
    sim.add_argument("--per-subcarrier", action="store_true",
                     help="also emit one row per subcarrier")
    sim.add_argument("--workers", type=int, default=1,
                     help="parallel (drop, realization) workers")

    summ = sub.add_parser("summarize", help="print empirical CDF tables")
    summ.add_argument("--in", dest="in_dir", required=True,
                      help="directory holding results.csv")
    summ.add_argument("--format", choices=("csv", "json"), default="csv",
                      help="table format written to stdout")
    summ.add_argument("--per-subcarrier", action="store_true",
                      help="summarize per-subcarrier rows instead of averages")
    return parser


def _simulate(args) -> int:
    scenario = load_config(args.config)
    overrides = {"out_dir": args.out, "per_subcarrier": args.per_subcarrier,
                 "workers": args.workers,
                 "combiners": tuple(k.strip() for k in args.combiners.split(",") if k.strip()),
                 "ablations": ("none", *(f"no-{name}" for name in dict.fromkeys(args.disable)))}
    if args.drops is not None:
        overrides["drops"] = args.drops
    if args.realizations is not None:
        overrides["realizations_per_drop"] = args.realizations
    if args.bussgang_samples is not None:
        overrides["bussgang_samples"] = args.bussgang_samples
    if args.seed is not None:
        overrides["seed"] = args.seed
    plan = plan_from_scenario(scenario, **overrides)
    paths = run_experiment(scenario, plan)
    print(f"wrote {paths['rows']} rows to {paths['csv']}")
    print(f"run metadata in {paths['json']}")
    return 0


def _summarize(args) -> int:
    tables = summarize(args.in_dir, per_subcarrier=args.per_subcarrier)
    for (combiner, ablation), table in sorted(tables.items()):
        print(f"{combiner}/{ablation}: n={table['count']} "
              f"median={table['median']:.4f} p10={table['p10']:.4f}",
              file=sys.stderr)
    sys.stdout.write(format_summary(tables, args.format))
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "simulate":
        return _simulate(args)
    if args.command == "summarize":
        return _summarize(args)
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
