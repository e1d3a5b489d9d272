"""Command-line entry point.

    crowdegress run SCENARIO --out DIR [--snapshot-every N]
    crowdegress sweep --widths 1,3,5 --seeds 1..10 --out DIR
    crowdegress analyze METRICS_CSV [--min-window N ...]
    crowdegress corridor --exit-width 3 -o FILE

Exit status: 0 success, 1 input error, 2 I/O error.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

from .core import BehaviorParams, ScenarioError, TargetRule
from .engine import run
from .metrics import MetricsLog, SchemaError
from .report import (
    Thresholds,
    analyze_log,
    arch_csv,
    read_summary,
    render_frame,
    summarize,
    write_text,
)
from .scenario_io import make_corridor_scenario, parse_scenario, serialize_scenario
from .sweep import SweepConfig, run_sweep, sweep_csv, sweep_summary_csv

EXIT_OK, EXIT_INPUT, EXIT_IO = 0, 1, 2


def parse_int_list(text: str) -> list[int]:
    """``"1,3,5"``, ``"1..10"`` or a mix such as ``"1..3,7"``."""
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if ".." in part:
            lo, _, hi = part.partition("..")
            a, b = int(lo), int(hi)
            if b < a:
                raise ValueError(f"empty range {part!r}")
            out.extend(range(a, b + 1))
        else:
            out.append(int(part))
    if not out:
        raise ValueError("empty list")
    return out


def _int_list(text: str) -> list[int]:
    try:
        return parse_int_list(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def cmd_run(scenario_path: str, out_dir: str, snapshot_every: int = 0) -> int:
    try:
        text = Path(scenario_path).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        scenario = parse_scenario(text)
    except ScenarioError as exc:
        print(f"error: {scenario_path}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if snapshot_every < 0:
        print("error: --snapshot-every must be >= 0", file=sys.stderr)
        return EXIT_INPUT

    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)

        def snapshot(state) -> None:
            if snapshot_every and state.tick % snapshot_every == 0:
                write_text(out / f"frame_{state.tick}.txt", render_frame(state.world))

        state, log, arches = run(scenario, on_tick=snapshot)
        th = Thresholds.for_region(len(state.geometry.region))
        summary = summarize(log, arches, th)
        write_text(out / "metrics.csv", log.to_csv())
        write_text(out / "arch.csv", arch_csv(arches))
        write_text(out / "summary.txt", summary.to_text())
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    print(summary.to_text(), end="")
    return EXIT_OK


def cmd_sweep(widths: Sequence[int], seeds: Sequence[int], out_dir: str, config: SweepConfig = SweepConfig(),
              workers: int = 1) -> int:
    try:
        runs = run_sweep(widths, seeds, config, workers=workers)
    except (ValueError, ScenarioError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        write_text(out / "sweep.csv", sweep_csv(runs))
        write_text(out / "sweep_summary.csv", sweep_summary_csv(runs))
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    print(sweep_summary_csv(runs), end="")
    return EXIT_OK


def _stored_thresholds(metrics_path: Path) -> dict[str, int]:
    summary = metrics_path.with_name("summary.txt")
    if not summary.is_file():
        return {}
    values = read_summary(summary.read_text(encoding="utf-8"))
    keys = ("clog_min_window", "clog_min_density", "calm_window", "calm_max_range")
    return {k: int(values[k]) for k in keys if k in values}


def cmd_analyze(metrics_path: str, overrides: Optional[dict[str, int]] = None) -> int:
    """Re-run the log detectors on a stored metrics.csv.

    Thresholds default to those recorded in a sibling summary.txt, so an
    untouched run directory reproduces its own summary; flags override.
    """
    path = Path(metrics_path)
    try:
        text = path.read_text(encoding="utf-8")
        stored = _stored_thresholds(path)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        log = MetricsLog.from_csv(text)
        th = Thresholds(**{**stored, **(overrides or {})})
        result = analyze_log(log, th)
    except (SchemaError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print("\n".join(result.lines()))
    return EXIT_OK


def cmd_corridor(args: argparse.Namespace) -> int:
    try:
        scenario = make_corridor_scenario(args.corridor_width, args.corridor_length, args.exit_width,
                                          args.crowd, args.seed, params=_params(args))
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    text = serialize_scenario(scenario)
    if args.output in (None, "-"):
        sys.stdout.write(text)
        return EXIT_OK
    try:
        write_text(Path(args.output), text)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def _params(args: argparse.Namespace) -> BehaviorParams:
    return BehaviorParams(args.fov_radius, args.fov_half_angle, args.exit_region_depth, TargetRule(args.target_rule))


def _add_geometry_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--corridor-width", type=int, default=19)
    p.add_argument("--corridor-length", type=int, default=30)
    p.add_argument("--crowd", type=int, default=400)
    p.add_argument("--fov-radius", type=float, default=3.0)
    p.add_argument("--fov-half-angle", type=float, default=90.0, help="degrees")
    p.add_argument("--exit-region-depth", type=int, default=3)
    p.add_argument("--target-rule", choices=[r.value for r in TargetRule], default=TargetRule.NEAREST_TO_EXIT.value)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="crowdegress", description="Grid crowd egress microsimulation.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run one scenario file")
    p.add_argument("scenario")
    p.add_argument("--out", required=True)
    p.add_argument("--snapshot-every", type=int, default=0, metavar="N")

    p = sub.add_parser("sweep", help="exit-width sweep over corridor scenarios")
    p.add_argument("--widths", type=_int_list, default=[1, 3, 5, 7, 9, 11, 13])
    p.add_argument("--seeds", type=_int_list, default=list(range(1, 11)))
    p.add_argument("--max-ticks", type=int, default=10_000)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", required=True)
    _add_geometry_flags(p)

    p = sub.add_parser("analyze", help="re-run detectors on a metrics.csv")
    p.add_argument("metrics")
    p.add_argument("--min-window", type=int, dest="clog_min_window")
    p.add_argument("--min-density", type=int, dest="clog_min_density")
    p.add_argument("--calm-window", type=int, dest="calm_window")
    p.add_argument("--calm-max-range", type=int, dest="calm_max_range")

    p = sub.add_parser("corridor", help="write a corridor scenario file")
    p.add_argument("--exit-width", type=int, default=3)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("-o", "--output")
    _add_geometry_flags(p)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT

    if args.command == "run":
        return cmd_run(args.scenario, args.out, args.snapshot_every)
    if args.command == "sweep":
        try:
            config = SweepConfig(args.corridor_width, args.corridor_length, args.crowd, _params(args), args.max_ticks)
        except ScenarioError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INPUT
        return cmd_sweep(args.widths, args.seeds, args.out, config, workers=max(1, min(args.workers, os.cpu_count() or 1)))
    if args.command == "analyze":
        keys = ("clog_min_window", "clog_min_density", "calm_window", "calm_max_range")
        overrides = {k: getattr(args, k) for k in keys if getattr(args, k) is not None}
        return cmd_analyze(args.metrics, overrides)
    return cmd_corridor(args)


if __name__ == "__main__":
    sys.exit(main())
