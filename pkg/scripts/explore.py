"""Parameter exploration for the arch, burst, clog and double-arch detectors.

Runs a grid of behaviour settings over a few exit widths and seeds and prints
one Markdown table row per setting. Usage::

    python scripts/explore.py [--seeds 1,2] [--widths 1,3,7,13] > docs/exploration.md
"""

from __future__ import annotations

import argparse
import itertools
import statistics
import sys

from crowdegress.arch import double_arch_runs
from crowdegress.cli import parse_int_list
from crowdegress.core import BehaviorParams, TargetRule
from crowdegress.sweep import SweepConfig, run_one

RADII = (1.5, 3.0, 5.0)
HALF_ANGLES = (45.0, 90.0, 180.0)


def explore(widths, seeds, crowd, length):
    print("| radius | half-angle | rule | mean peak_major by width | mean B | runs with clog | "
          "runs with double arch >= 10 ticks |")
    print("|---|---|---|---|---|---|---|")
    for radius, angle, rule in itertools.product(RADII, HALF_ANGLES, TargetRule):
        config = SweepConfig(19, length, crowd, BehaviorParams(radius, angle, 3, rule))
        runs = [run_one(w, s, config, keep_logs=True) for w in widths for s in seeds]
        majors = " ".join(
            f"{statistics.fmean(r.summary.peak_major for r in runs if r.width == w):.0f}" for w in widths)
        bursts = [r.summary.analysis.burstiness for r in runs if r.summary.analysis.burstiness is not None]
        clogs = sum(bool(r.summary.analysis.clog_intervals) for r in runs)
        doubles = sum(bool(double_arch_runs(r.arches, 10)) for r in runs)
        print(f"| {radius} | {angle:g} | {rule.value} | {majors} | {statistics.fmean(bursts):+.3f} | "
              f"{clogs}/{len(runs)} | {doubles}/{len(runs)} |")
        sys.stdout.flush()


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--widths", type=parse_int_list, default=[1, 3, 7, 13])
    p.add_argument("--seeds", type=parse_int_list, default=[1, 2])
    p.add_argument("--crowd", type=int, default=400)
    p.add_argument("--corridor-length", type=int, default=30)
    args = p.parse_args(argv)
    explore(args.widths, args.seeds, args.crowd, args.corridor_length)


if __name__ == "__main__":
    main()
