"""Command line entry point.

    hausdorff-lab run CONFIG [--out DIR] [--seed INT] [--format csv|json]
    hausdorff-lab validate CONFIG
    hausdorff-lab demo CASE [--out DIR] [--seed INT] [--format csv|json]

Exit status: 0 on success, 1 on a config error, 2 when any ledger row fails.
"""
from __future__ import annotations

import argparse
import copy
import sys

from .runner import ConfigError, load_config, parse_config, run_experiment

EXIT_OK, EXIT_CONFIG, EXIT_LEDGER = 0, 1, 2

_ALL = ["moments", "bounds", "norm_sweep", "hs", "spectrum", "verdicts", "cross_validate"]

DEMOS = {
    "identity": {
        "symbol": {"kind": "constant", "value": 1.0},
        "measure": {"kind": "atomic", "atoms": [[1.0, 1.0]]},
        "space": {"kind": "pw"},
        "diagnostics": ["moments", "bounds", "norm_sweep", "hs", "spectrum", "cross_validate"],
    },
    "dilation": {
        "symbol": {"kind": "constant", "value": 1.0},
        "measure": {"kind": "atomic", "atoms": [[2.0, 1.0]]},
        "space": {"kind": "pw"},
        "diagnostics": ["moments", "norm_sweep", "bounds", "hs"],
        "knobs": {"N_list": [8, 16, 32, 64], "n_max": 4},
    },
    "two-atoms": {
        "symbol": {"kind": "constant", "value": 1.0},
        "measure": {"kind": "atomic", "atoms": [[1.0, 0.5], [2.0, 0.5]]},
        "space": {"kind": "pw"},
        "diagnostics": ["norm_sweep", "bounds", "cross_validate"],
    },
    "gap-failure": {
        "symbol": {"kind": "constant", "value": 1.0},
        "measure": {"kind": "atomic", "atoms": [[0.5, 1.0]]},
        "space": {"kind": "fock", "phi": {"kind": "gaussian"}},
        "diagnostics": ["moments", "verdicts"],
    },
    "fock-compact": {
        "symbol": {"kind": "constant", "value": 1.0},
        "measure": {"kind": "density", "a": 1.5, "b": 3.0},
        "space": {"kind": "fock", "phi": {"kind": "gaussian"}},
        "diagnostics": ["moments", "bounds", "verdicts", "cross_validate"],
    },
    "zero": {
        "symbol": {"kind": "zero"},
        "measure": {"kind": "atomic", "atoms": [[2.0, 1.0]]},
        "space": {"kind": "pw"},
        "diagnostics": list(_ALL),
    },
}


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hausdorff-lab",
                                description="Hausdorff operator experiments on PW and Fock models")
    sub = p.add_subparsers(dest="command", required=True)

    def add_output(sp):
        sp.add_argument("--out", default=None, help="directory for report files")
        sp.add_argument("--seed", type=int, default=None, help="override the config seed")
        sp.add_argument("--format", choices=("csv", "json"), default="csv")

    run = sub.add_parser("run", help="run a config file")
    run.add_argument("config")
    add_output(run)
    val = sub.add_parser("validate", help="check a config file without running it")
    val.add_argument("config")
    demo = sub.add_parser("demo", help="run a built-in case")
    demo.add_argument("case", choices=sorted(DEMOS))
    add_output(demo)
    return p


def _summarize(report) -> None:
    print(f"config {report.config_hash[:12]}  regime={report.regime}")
    for r in report.ledger:
        print(f"  [{r.verdict.upper():4}] {r.bound_name}: lhs={r.computed_lhs:.10g} "
              f"rhs={r.computed_rhs:.10g} tol={r.tolerance:g}")
    for name, v in report.verdicts.items():
        print(f"  verdict {name}: {v['verdict'] if isinstance(v, dict) and 'verdict' in v else v}")
    for name, msg in report.errors.items():
        print(f"  error in {name}: {msg}")
    for name, msg in report.skipped.items():
        print(f"  skipped {name}: {msg}")


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "demo":
            cfg = parse_config(copy.deepcopy(DEMOS[args.case]), seed=args.seed)
        else:
            cfg = load_config(args.config, seed=getattr(args, "seed", None))
    except (ConfigError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.command == "validate":
        print(f"ok: {len(cfg.diagnostics)} diagnostic(s), space={cfg.space}, seed={cfg.seed}")
        return EXIT_OK
    report = run_experiment(cfg, out_dir=args.out, fmt=args.format)
    _summarize(report)
    return EXIT_OK if report.all_pass else EXIT_LEDGER


if __name__ == "__main__":
    sys.exit(main())
