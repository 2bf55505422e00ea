"""Command-line entry point: run experiments, write reports, render figures.

Every experiment subcommand takes a JSON config file, runs deterministically
from its seed, writes a report directory (report.json plus CSV tables), and
renders the matching figures next to the tables unless --no-figures is
passed.  Validation failures exit with a machine-readable JSON record on
stderr and a distinct exit code per failure class.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from ._version import __version__
from .config import (
    EXIT_FAILURE,
    EXIT_OK,
    EXPERIMENT_KINDS,
    apply_overrides,
    error_record,
    exit_code_for,
    load_config,
    run,
)
from .errors import ConfigurationError, MVTEMError
from .figures import PLOTTERS, plot_convergence, render_report
from .models import get_model, list_models


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mvtem",
        description=(
            "Truncated Euler-Maruyama experiments for interacting particle "
            "systems with super-linear coefficients."
        ),
    )
    parser.add_argument("--version", action="version", version=f"mvtem {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    for kind in EXPERIMENT_KINDS:
        p = sub.add_parser(kind, help=f"run the {kind} experiment from a JSON config")
        p.add_argument("--config", required=True, help="path to the JSON run config")
        p.add_argument("--out", help="report directory (overrides config key 'out')")
        p.add_argument("--seed", type=int, help="override the config seed")
        p.add_argument(
            "--threads",
            type=int,
            default=1,
            help="worker threads for independent runs (0 = auto); output "
            "bytes do not depend on this",
        )
        p.add_argument(
            "--set",
            action="append",
            default=[],
            metavar="KEY=VALUE",
            help="override a config key before validation; dotted keys "
            "descend into nested objects, values parse as JSON",
        )
        p.add_argument(
            "--no-figures",
            action="store_true",
            help="write only report.json and the CSV tables",
        )

    p = sub.add_parser("list-models", help="list registered models")

    p = sub.add_parser("plot", help="render one figure from an existing report")
    p.add_argument("kind", choices=sorted(PLOTTERS), help="figure kind")
    p.add_argument("--report", required=True, help="report directory to read")
    p.add_argument("--out", required=True, help="output image path")

    return parser


def _print_model_list() -> None:
    for name, _ in list_models():
        model = get_model(name)
        print(f"{name}: d={model.dim_state}, m={model.dim_noise} - {model.summary}")


def _print_stats(stats: dict) -> None:
    for key in sorted(stats):
        value = stats[key]
        if isinstance(value, float):
            print(f"[INFO] {key} = {value:.6g}")
        else:
            print(f"[INFO] {key} = {value}")


def _run_experiment(args) -> int:
    cfg = load_config(args.config)
    if args.set:
        cfg = apply_overrides(cfg, args.set)
    if cfg.get("experiment") is None:
        cfg["experiment"] = args.command
    if cfg["experiment"] != args.command:
        raise ConfigurationError(
            f"config describes experiment {cfg['experiment']!r} but the "
            f"{args.command!r} subcommand was invoked",
            field="experiment",
        )
    if args.seed is not None:
        cfg["seed"] = args.seed
    out = args.out or cfg.get("out")
    if not out:
        raise ConfigurationError(
            "no output directory: pass --out or set config key 'out'", field="out"
        )

    report = run(cfg, threads=args.threads)
    out_dir = Path(out)
    written = report.write(out_dir)
    for path in written:
        print(f"[INFO] wrote {path}")
    if not args.no_figures:
        for path in render_report(out_dir):
            print(f"[INFO] wrote {path}")
    _print_stats(report.stats)
    return EXIT_OK


def _run_plot(args) -> int:
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    result = PLOTTERS[args.kind](args.report, out)
    print(f"[INFO] wrote {out}")
    if args.kind == "convergence" and result is not None:
        print(f"[INFO] fitted slope = {result:.6g}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "list-models":
            _print_model_list()
            return EXIT_OK
        if args.command == "plot":
            return _run_plot(args)
        return _run_experiment(args)
    except MVTEMError as err:
        print(json.dumps(error_record(err), sort_keys=True), file=sys.stderr)
        return exit_code_for(err)


if __name__ == "__main__":
    sys.exit(main())
