"""Command-line entry points: run experiments, verify a config, plot regret curves."""
from __future__ import annotations

import argparse
import glob
import sys

from .errors import GftplError
from .harness import emit_regret_curve, load_config, run_experiment, verify_environment


def _cmd_run(args):
    config = load_config(args.config)
    seeds = [int(s) for s in args.seeds.split(",")] if args.seeds else None
    summary = run_experiment(config, args.out, seeds=seeds, jobs=args.jobs)
    for record in summary["records"]:
        print(f"seed {record['seed']} T={record['horizon']}: "
              f"regret {record['regret']:.4f} (bound {record['bound']:.1f}), "
              f"switch fraction {record['switch_fraction']:.4f}")
    for t, r in summary["mean_regret"].items():
        print(f"mean regret @ T={t}: {r:.4f}")
    if "regret_ratio" in summary:
        print(f"regret ratio: {summary['regret_ratio']:.3f}")
    print(f"outputs in {args.out}")
    return 0


def _cmd_verify(args):
    config = load_config(args.config)
    results = verify_environment(config)
    failures = 0
    for name, ok, detail in results:
        print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
        failures += 0 if ok else 1
    return 1 if failures else 0


def _cmd_plot(args):
    paths = sorted(glob.glob(args.traces))
    emit_regret_curve(paths, args.out)
    print(f"wrote {args.out} ({len(paths)} traces)")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="gftpl",
                                     description="Oracle-efficient perturbed-leader experiments")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run the experiment described by a config file")
    p_run.add_argument("config")
    p_run.add_argument("--out", default="out", help="output directory")
    p_run.add_argument("--seeds", default=None, help="comma-separated seed override")
    p_run.add_argument("--jobs", type=int, default=1, help="parallel worker threads")
    p_run.set_defaults(func=_cmd_run)

    p_verify = sub.add_parser("verify", help="run the invariant suite for a config's environment")
    p_verify.add_argument("config")
    p_verify.set_defaults(func=_cmd_verify)

    p_plot = sub.add_parser("plot", help="plot cumulative regret curves from trace CSVs")
    p_plot.add_argument("traces", help="glob pattern of trace CSV files")
    p_plot.add_argument("--out", required=True, help="output image path (SVG recommended)")
    p_plot.set_defaults(func=_cmd_plot)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except GftplError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
