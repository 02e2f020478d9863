"""Command line entry point: ``airswarm run|metrics|plot|validate``."""

import argparse
import sys
from pathlib import Path

from .errors import AirswarmError, ScenarioError, SimulationAborted
from .metrics import compute_metrics, write_metrics
from .output import read_trace_csv, write_csv, write_svg
from .scenario import load_scenario
from .sim import run_simulation

EXIT_OK, EXIT_INVALID, EXIT_RUNTIME = 0, 1, 2


def _run(args):
    scenario = load_scenario(args.scenario)
    if args.seed is not None:
        scenario = scenario.with_seed(args.seed)
    trace = run_simulation(scenario)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_csv(trace, out / "trace.csv")
    summary = compute_metrics(trace, scenario)
    write_metrics(summary, out / "metrics.json")
    write_svg(trace, out / "trajectory.svg", title=f"{scenario.name} (seed {scenario.seed})")
    print(f"{scenario.name}: {len(trace)} records written to {out}")
    _print_summary(summary)


def _print_summary(summary):
    for name in ("leader", "followers", "centre"):
        s = getattr(summary, name)
        if s is not None:
            print(f"{name:9s} mean {s.mean:8.3f} m  std {s.std:8.3f} m  max {s.max:8.3f} m")


def _metrics(args):
    trace = _read_trace(args.trace)
    summary = compute_metrics(trace, transient_s=args.transient)
    if args.json:
        write_metrics(summary, args.json)
    _print_summary(summary)


def _plot(args):
    trace = _read_trace(args.trace)
    write_svg(trace, args.svg, title=Path(args.trace).stem)


def _read_trace(path):
    if not Path(path).is_file():
        raise ScenarioError(f"trace file not found: {path}")
    return read_trace_csv(path)


def _validate(args):
    scenario = load_scenario(args.scenario)
    print(f"{scenario.name}: ok ({scenario.approach.value}, {len(scenario.airships)} airships, "
          f"{scenario.steps} steps)")


def build_parser():
    parser = argparse.ArgumentParser(prog="airswarm", description="Multi-airship guidance simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="simulate a scenario and write trace.csv, metrics.json, trajectory.svg")
    run.add_argument("scenario", help="scenario JSON file or bundled scenario name")
    run.add_argument("--seed", type=int, help="override the scenario seed")
    run.add_argument("--out", default="out", help="output directory (default: out)")
    run.set_defaults(func=_run)

    met = sub.add_parser("metrics", help="tracking-error statistics of a trace CSV")
    met.add_argument("trace")
    met.add_argument("--transient", type=float, default=0.0, help="seconds to skip (default 0)")
    met.add_argument("--json", help="also write the summary to this file")
    met.set_defaults(func=_metrics)

    plot = sub.add_parser("plot", help="render a trace CSV as SVG")
    plot.add_argument("trace")
    plot.add_argument("--svg", required=True)
    plot.set_defaults(func=_plot)

    val = sub.add_parser("validate", help="check a scenario file")
    val.add_argument("scenario")
    val.set_defaults(func=_validate)
    return parser


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; those are invalid input here
        return EXIT_OK if exc.code in (0, None) else EXIT_INVALID
    if args.command == "run" and args.seed is not None and not 0 <= args.seed < 2**64:
        print("error: --seed must fit in 64 bits", file=sys.stderr)
        return EXIT_INVALID
    try:
        args.func(args)
    except SimulationAborted as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except AirswarmError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc.filename or ''}: {exc.strerror}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
