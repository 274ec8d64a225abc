"""Command-line surface.

Subcommands:
  run            simulate a scenario, writing a trace and a metrics report
  validate       lint a scenario file without running it
  analyze-clock  extremum analysis of a drift parameter pair
  export-dot     DOT snapshot of a scenario's topology at an instant
  diff-trace     compare two trace files

Exit codes: 0 success, 1 validation error (or differing traces for
diff-trace), 2 runtime error.
"""

import argparse
import json
import sys

from .clocks import ClockParameters, extremum_analysis
from .dotexport import export_graph
from .netview import NetworkView
from .scenario import ScenarioError, load_scenario, run_scenario
from .trace import diff_traces, load_trace, trace_sha256, write_trace, TraceFormatError

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_RUNTIME = 2


def _cmd_run(args) -> int:
    try:
        scenario = load_scenario(args.scenario)
    except ScenarioError as exc:
        for problem in exc.problems:
            print(f"error: {problem}", file=sys.stderr)
        return EXIT_VALIDATION
    try:
        engine, records, metrics = run_scenario(scenario, seed=args.seed)
    except Exception as exc:  # NoRoute-fatal and other simulation failures
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    if args.trace:
        write_trace(records, args.trace)
    if args.metrics:
        with open(args.metrics, "w", encoding="utf-8") as handle:
            json.dump(metrics, handle, indent=2, sort_keys=True)
            handle.write("\n")
    summary = metrics["messages"]
    print(f"{len(records)} events; messages sent={summary['sent']} "
          f"delivered={summary['delivered']} dropped={summary['dropped']} "
          f"blocked={summary['blocked']}; sync rounds="
          f"{metrics['aggregate']['sync_rounds']} "
          f"(failures={metrics['aggregate']['sync_failures']}); "
          f"trace sha256={trace_sha256(records)}")
    return EXIT_OK


def _cmd_validate(args) -> int:
    try:
        load_scenario(args.scenario)
    except ScenarioError as exc:
        for problem in exc.problems:
            print(f"error: {problem}", file=sys.stderr)
        return EXIT_VALIDATION
    print(f"{args.scenario}: OK")
    return EXIT_OK


def _cmd_analyze_clock(args) -> int:
    params = ClockParameters(alpha0=args.alpha0, beta=args.beta, gamma=args.gamma,
                             model_kind="quadratic" if args.gamma != 0 else "linear")
    report = extremum_analysis(params)
    payload = {
        "has_extremum": report.has_extremum,
        "t_star_s": report.t_star,
        "classification": report.classification,
        "concavity_per_s": report.concavity,
    }
    if report.has_extremum:
        payload["offset_at_t_star_s"] = params.drift_offset(report.t_star)
    print(json.dumps(payload, sort_keys=True))
    return EXIT_OK


def _cmd_export_dot(args) -> int:
    try:
        scenario = load_scenario(args.scenario)
    except ScenarioError as exc:
        for problem in exc.problems:
            print(f"error: {problem}", file=sys.stderr)
        return EXIT_VALIDATION
    view = NetworkView(scenario.graph, scenario.config.seed, scenario.attacks,
                       scenario.medium_speeds)
    text = export_graph(view, args.time)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_diff_trace(args) -> int:
    try:
        a = load_trace(args.trace_a)
        b = load_trace(args.trace_b)
    except (OSError, TraceFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    summary = diff_traces(a, b)
    if summary["identical"]:
        print(f"traces identical ({summary['records_a']} records)")
        return EXIT_OK
    print(json.dumps(summary, indent=2, sort_keys=True))
    return EXIT_VALIDATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="syncsim",
        description="Deterministic clock-synchronization network simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a scenario")
    run.add_argument("--scenario", required=True)
    run.add_argument("--seed", type=int, default=None,
                     help="override the scenario's seed")
    run.add_argument("--trace", default=None, help="trace output path")
    run.add_argument("--metrics", default=None, help="metrics JSON output path")
    run.set_defaults(func=_cmd_run)

    val = sub.add_parser("validate", help="lint a scenario file")
    val.add_argument("--scenario", required=True)
    val.set_defaults(func=_cmd_validate)

    ana = sub.add_parser("analyze-clock", help="drift extremum analysis")
    ana.add_argument("--beta", type=float, required=True)
    ana.add_argument("--gamma", type=float, required=True)
    ana.add_argument("--alpha0", type=float, default=0.0)
    ana.set_defaults(func=_cmd_analyze_clock)

    dot = sub.add_parser("export-dot", help="export topology snapshot as DOT")
    dot.add_argument("--scenario", required=True)
    dot.add_argument("--time", type=float, default=0.0,
                     help="snapshot instant in simulated seconds")
    dot.add_argument("--output", default=None)
    dot.set_defaults(func=_cmd_export_dot)

    diff = sub.add_parser("diff-trace", help="compare two trace files")
    diff.add_argument("trace_a")
    diff.add_argument("trace_b")
    diff.set_defaults(func=_cmd_diff_trace)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
