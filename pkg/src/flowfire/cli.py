"""Command-line front end.

Subcommands construct pulses and diamonds, replay fire traces, run the
stabilization policies, explore reachability, classify pulse regimes,
print the regime-boundary table, and render configurations.  Output goes
to standard output as JSON when piped (or with ``--style json``); when
attached to a terminal the human-readable form is used instead.  Figures
(``--style svg``, ``table --figure``) are written to files.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import render
from .explore import ExploreBounds, ExploreError, default_bounds, explore
from .firing import (
    IllegalFireError,
    InvalidMoveError,
    is_stable,
    replay,
    trace_from_json,
    trace_to_json,
)
from .grid import ConfigError, MarkedConfig, config_to_json, loads_config, make_aztec, make_pulse
from .pathfire import OutOfPathError, OutOfScopeError
from .strategies import (
    AztecViolationError,
    BudgetExceededError,
    NothingToFloodError,
    QuadrantDecomposition,
    ScheduleUnstableError,
    ceil_half,
    classify,
    complete_to_aztec,
    flood_escape,
    min_r_exceeding,
    regime3_radius,
    stabilize_any,
    sweep_quadrants,
)

_DOMAIN_ERRORS = (
    ConfigError,
    InvalidMoveError,
    IllegalFireError,
    OutOfScopeError,
    OutOfPathError,
    AztecViolationError,
    NothingToFloodError,
    BudgetExceededError,
    ScheduleUnstableError,
    ExploreError,
    OSError,
    json.JSONDecodeError,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="flowfire",
        description="Flow-firing on the marked square grid.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--seed", type=int, default=None,
        help="accepted for script compatibility; everything here is deterministic",
    )
    common.add_argument(
        "--style", choices=["ascii", "json", "svg", "text", "csv"], default=None,
        help="output form; defaults to json when piped, human-readable on a terminal",
    )
    common.add_argument("--out", default=None, help="output file (required for --style svg)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pulse", parents=[common], help="emit the pulse of height n and radius r")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, required=True)

    p = sub.add_parser("aztec", parents=[common], help="emit the Aztec diamond of height n")
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("fire", parents=[common], help="replay a trace of moves on a configuration")
    p.add_argument("--config", required=True)
    p.add_argument("--trace", required=True)

    p = sub.add_parser("stabilize", parents=[common], help="run a stabilization policy")
    p.add_argument("--config", required=True)
    p.add_argument(
        "--policy",
        choices=["first", "flood", "quadrant:d1", "quadrant:d2", "to-aztec"],
        default="first",
    )
    p.add_argument("--max-steps", type=int, default=10_000_000)
    p.add_argument("--trace-out", default=None, help="write the applied moves as a JSON trace")

    p = sub.add_parser("explore", parents=[common], help="exhaustive reachability (JSON output)")
    p.add_argument("--config", required=True)
    p.add_argument("--radius-cap", type=int, default=None)
    p.add_argument("--max-states", type=int, default=1_000_000)
    p.add_argument("--max-depth", type=int, default=None)
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("classify", parents=[common], help="regime of the pulse (n, r)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, required=True)

    p = sub.add_parser("table", parents=[common], help="regime boundaries for a range of n")
    p.add_argument("--n-min", type=int, default=3)
    p.add_argument("--n-max", type=int, default=24)
    p.add_argument("--figure", default=None, help="also chart the bounds to this file")

    p = sub.add_parser("render", parents=[common], help="render a configuration")
    p.add_argument("--config", required=True)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {
        "pulse": _cmd_pulse,
        "aztec": _cmd_aztec,
        "fire": _cmd_fire,
        "stabilize": _cmd_stabilize,
        "explore": _cmd_explore,
        "classify": _cmd_classify,
        "table": _cmd_table,
        "render": _cmd_render,
    }[args.command]
    try:
        return handler(args)
    except _DOMAIN_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _style(args, human="ascii"):
    if args.style:
        return args.style
    return human if sys.stdout.isatty() else "json"


def _load_config(path: str) -> MarkedConfig:
    with open(path, encoding="utf-8") as fh:
        return loads_config(fh.read())


def _emit_config(c: MarkedConfig, args) -> int:
    style = _style(args)
    if style == "json":
        print(json.dumps(config_to_json(c)))
    elif style == "ascii" or style == "text":
        print(render.ascii_grid(c))
    elif style == "svg":
        if not args.out:
            print("error: --style svg needs --out FILE", file=sys.stderr)
            return 2
        render.save_config_figure(c, args.out)
        print(f"wrote {args.out}")
    else:
        print(f"error: style {style} does not apply here", file=sys.stderr)
        return 2
    return 0


def _cmd_pulse(args) -> int:
    return _emit_config(make_pulse(args.n, args.r), args)


def _cmd_aztec(args) -> int:
    return _emit_config(make_aztec(args.n), args)


def _cmd_fire(args) -> int:
    config = _load_config(args.config)
    with open(args.trace, encoding="utf-8") as fh:
        trace = trace_from_json(json.load(fh))
    try:
        final = replay(config, trace)
    except IllegalFireError as exc:
        print(f"error: move {exc.index}: {exc.rule}", file=sys.stderr)
        return 1
    return _emit_config(final, args)


def _cmd_stabilize(args) -> int:
    config = _load_config(args.config)
    trace = None
    if args.policy == "first":
        result = stabilize_any(config, max_steps=args.max_steps)
    elif args.policy == "flood":
        flooded, trace = flood_escape(config, config.n)
        result = stabilize_any(flooded, max_steps=args.max_steps, trace=trace)
    elif args.policy == "to-aztec":
        result, trace = complete_to_aztec(config, config.n)
    else:
        decomposition = QuadrantDecomposition(args.policy.split(":", 1)[1])
        result, trace = sweep_quadrants(config, decomposition)
        if not is_stable(result):
            print(
                "error: quadrant schedule fixed point is not stable for this "
                "configuration (the marked face can still fire)",
                file=sys.stderr,
            )
            return 1
    if args.trace_out:
        if trace is None:
            print("note: policy 'first' does not record a trace", file=sys.stderr)
        else:
            with open(args.trace_out, "w", encoding="utf-8") as fh:
                json.dump(trace_to_json(trace), fh)
                fh.write("\n")
    return _emit_config(result, args)


def _cmd_explore(args) -> int:
    config = _load_config(args.config)
    if args.radius_cap is None:
        bounds = default_bounds(config, max_states=args.max_states)
        if args.max_depth is not None:
            bounds = ExploreBounds(bounds.radius_cap, args.max_states, args.max_depth)
    else:
        bounds = ExploreBounds(args.radius_cap, args.max_states, args.max_depth)
    result = explore(config, bounds, workers=args.workers)
    print(json.dumps(result.to_json()))
    return 0


def _cmd_classify(args) -> int:
    report = classify(args.n, args.r)
    if _style(args, human="text") == "json":
        print(json.dumps(report.to_json()))
        return 0
    print(f"pulse ({report.n}, {report.r}): regime {report.regime.value}")
    print(f"  pulse weight  {report.pulse_weight}")
    print(f"  aztec weight  {report.aztec_weight}")
    print(f"  min r with heavier pulse: {report.min_r_exceeding}")
    if report.aztec_unreachable_by_weight:
        print("  the pulse outweighs the diamond: it can never terminate there")
    return 0


def _table_rows(n_min: int, n_max: int) -> list[dict]:
    rows = []
    for n in range(n_min, n_max + 1):
        rows.append(
            {
                "n": n,
                "half_ceiling": ceil_half(n),
                "min_r_exceeding": min_r_exceeding(n),
                "unreachable_radius": regime3_radius(n),
            }
        )
    return rows


_TABLE_NOTE_N3 = (
    "n=3: weight(pulse(3, 2)) = 39 < 43 = weight(aztec(3)), so the strict-inequality "
    "minimum is r = 3; a commonly quoted value of 2 does not satisfy it"
)


def _cmd_table(args) -> int:
    if args.n_min < 1 or args.n_max < args.n_min:
        print("error: need 1 <= n-min <= n-max", file=sys.stderr)
        return 2
    rows = _table_rows(args.n_min, args.n_max)
    note = _TABLE_NOTE_N3 if args.n_min <= 3 <= args.n_max else None
    style = _style(args, human="text")
    if style == "json":
        print(json.dumps({"rows": rows, "notes": [note] if note else []}))
    elif style == "csv":
        print("n,half_ceiling,min_r_exceeding,unreachable_radius")
        for row in rows:
            print(f"{row['n']},{row['half_ceiling']},{row['min_r_exceeding']},{row['unreachable_radius']}")
        if note:
            print(f"# {note}")
    else:
        header = f"{'n':>4} {'ceil(n/2)':>10} {'min r':>6} {'ceil(n/sqrt3)+1':>16}"
        print(header)
        for row in rows:
            print(
                f"{row['n']:>4} {row['half_ceiling']:>10} "
                f"{row['min_r_exceeding']:>6} {row['unreachable_radius']:>16}"
            )
        if note:
            print(f"note: {note}")
    if args.figure:
        render.save_bounds_figure(rows, args.figure)
        print(f"wrote {args.figure}", file=sys.stderr)
    return 0


def _cmd_render(args) -> int:
    return _emit_config(_load_config(args.config), args)


if __name__ == "__main__":
    sys.exit(main())
