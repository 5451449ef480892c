"""Command-line entry point.

Subcommands: classify, simulate, sweep, continue, nf-check.  Common
flags: --config, --out, --preset, --periods, --eps, plus --no-plot to
skip figure rendering.  Option precedence is preset < config file <
flags.  CSV goes to --out (command-named default), the figure to the
same path with a .png suffix, and classify prints a text report.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import experiments
from .experiments import PRESETS, build_config
from .periods import NonPeriodicError, ZeroFrequencyError

_CSV_COMMANDS = ("simulate", "sweep", "continue", "nf-check")

_RUN_ERRORS = (ValueError, NonPeriodicError, ZeroFrequencyError)


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="uwvstab",
        description=("Stability experiments for an axisymmetric underwater "
                     "vehicle: region classification, dissipation runs, "
                     "spectral continuation, and normal-form period checks."),
    )
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "classify": "report thresholds, region, spectrum, and twist data",
        "simulate": "run one long trajectory and write its samples",
        "sweep": "record the maximum radius over a Pe grid",
        "continue": "Newton-continue equilibria and their spectra over Pe",
        "nf-check": "compare measured and normal-form periods",
    }
    for name in ("classify",) + _CSV_COMMANDS:
        p = sub.add_parser(name, help=helps[name])
        p.add_argument("--config", metavar="PATH",
                       help="YAML config file (closed key set)")
        p.add_argument("--out", metavar="PATH",
                       help="output file (default: <command>.csv, "
                            "classify prints to stdout)")
        p.add_argument("--preset", choices=sorted(PRESETS),
                       help="named experiment profile")
        p.add_argument("--periods", type=float, metavar="N",
                       help="run length in linear periods")
        p.add_argument("--eps", type=float, metavar="V",
                       help="dissipation strength (amplitude for nf-check)")
        if name != "classify":
            p.add_argument("--no-plot", action="store_true",
                           help="skip the PNG figure")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    overrides = {}
    if args.periods is not None:
        overrides["periods"] = args.periods
    if args.eps is not None:
        overrides["eps"] = args.eps
    preset = args.preset
    if (args.command == "nf-check" and preset is None and args.config is None
            and args.eps is None):
        # The dissipation default is not a useful test amplitude; a bare
        # nf-check gets the standard amplitude ladder instead.
        preset = "paper-table1"
    try:
        cfg = build_config(preset, args.config, overrides)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    if args.command == "classify":
        text = experiments.cmd_classify(cfg).as_text()
        if args.out:
            Path(args.out).write_text(text, encoding="utf-8")
            print(f"wrote {args.out}")
        else:
            print(text, end="")
        return 0

    runner = {
        "simulate": experiments.cmd_simulate,
        "sweep": experiments.cmd_sweep,
        "continue": experiments.cmd_continue,
        "nf-check": experiments.cmd_nfcheck,
    }[args.command]
    try:
        result = runner(cfg)
    except _RUN_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    out = Path(args.out) if args.out else Path(f"{args.command}.csv")
    out.write_text(result.csv_text, encoding="utf-8")
    wrote = [str(out)]
    if not args.no_plot:
        from . import figures

        plotter = {
            "simulate": figures.plot_simulate,
            "sweep": figures.plot_sweep,
            "continue": figures.plot_continue,
            "nf-check": figures.plot_nfcheck,
        }[args.command]
        png = out.with_suffix(".png")
        plotter(result, str(png))
        wrote.append(str(png))
    n_rows = result.csv_text.count("\n") - 1
    print(f"wrote {' and '.join(wrote)} ({n_rows} rows)")
    if args.command == "simulate":
        print(f"termination: {result.termination}, max r: {result.max_r:.6g}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
