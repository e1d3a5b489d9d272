"""Exit-width sweep: one corridor run per (width, seed), collected in sorted order."""

from __future__ import annotations

import csv
import io
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .arch import ArchMeasurement
from .core import BehaviorParams
from .engine import run
from .metrics import MetricsLog
from .report import RunSummary, Thresholds, fmt_float, summarize
from .scenario_io import make_corridor_scenario

DEFAULT_WIDTHS = (1, 3, 5, 7, 9, 11, 13)

SWEEP_COLUMNS = ("width", "seed", "total_egress_ticks", "burstiness_index", "peak_major", "peak_minor",
                 "arch_onset_tick", "clog_total_ticks")
SUMMARY_COLUMNS = ("width", "runs", "mean_total_egress_ticks", "mean_burstiness_index", "mean_peak_major",
                   "mean_peak_minor", "mean_arch_onset_tick", "mean_clog_total_ticks")


@dataclass(frozen=True)
class SweepConfig:
    corridor_width: int = 19
    corridor_length: int = 30
    crowd_size: int = 400
    params: BehaviorParams = BehaviorParams()
    max_ticks: int = 10_000


@dataclass
class SweepRun:
    width: int
    seed: int
    summary: RunSummary
    log: Optional[MetricsLog] = None
    arches: Optional[list[ArchMeasurement]] = None

    def row(self) -> list[str]:
        s = self.summary
        b = "degenerate" if s.analysis.burstiness is None else fmt_float(s.analysis.burstiness)
        onset = "none" if s.arch_onset_tick is None else str(s.arch_onset_tick)
        return [str(self.width), str(self.seed), str(s.total_egress_ticks), b, fmt_float(s.peak_major),
                fmt_float(s.peak_minor), onset, str(s.analysis.clog_total_ticks)]


def run_one(width: int, seed: int, config: SweepConfig = SweepConfig(), keep_logs: bool = False) -> SweepRun:
    scenario = make_corridor_scenario(config.corridor_width, config.corridor_length, width,
                                      config.crowd_size, seed, params=config.params, max_ticks=config.max_ticks)
    state, log, arches = run(scenario)
    summary = summarize(log, arches, Thresholds.for_region(len(state.geometry.region)))
    if keep_logs:
        return SweepRun(width, seed, summary, log, arches)
    return SweepRun(width, seed, summary)


def _run_packed(args):
    return run_one(*args)


def run_sweep(widths: Iterable[int], seeds: Iterable[int], config: SweepConfig = SweepConfig(),
              workers: int = 1, keep_logs: bool = False) -> list[SweepRun]:
    """Every (width, seed) pair, returned sorted by (width, seed) whatever the execution order."""
    jobs = sorted({(w, s) for w in widths for s in seeds})
    for w, _ in jobs:
        if w % 2 == 0 or w > config.corridor_width or w < 1:
            raise ValueError(f"exit width {w} must be odd and within the corridor")
    packed = [(w, s, config, keep_logs) for w, s in jobs]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_packed, packed))
    else:
        results = [_run_packed(p) for p in packed]
    return sorted(results, key=lambda r: (r.width, r.seed))


def _mean(values: Sequence[float]) -> str:
    return fmt_float(statistics.fmean(values)) if values else "none"


def per_width_means(runs: Sequence[SweepRun]) -> dict[int, dict[str, float]]:
    out: dict[int, dict[str, float]] = {}
    for w in sorted({r.width for r in runs}):
        sel = [r.summary for r in runs if r.width == w]
        out[w] = {
            "peak_major": statistics.fmean(s.peak_major for s in sel),
            "peak_minor": statistics.fmean(s.peak_minor for s in sel),
            "total_egress_ticks": statistics.fmean(s.total_egress_ticks for s in sel),
        }
    return out


def sweep_csv(runs: Sequence[SweepRun]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_COLUMNS)
    w.writerows(r.row() for r in runs)
    return buf.getvalue()


def sweep_summary_csv(runs: Sequence[SweepRun]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SUMMARY_COLUMNS)
    for width in sorted({r.width for r in runs}):
        sel = [r.summary for r in runs if r.width == width]
        bursts = [s.analysis.burstiness for s in sel if s.analysis.burstiness is not None]
        onsets = [s.arch_onset_tick for s in sel if s.arch_onset_tick is not None]
        w.writerow([
            width, len(sel),
            _mean([s.total_egress_ticks for s in sel]),
            _mean(bursts),
            _mean([s.peak_major for s in sel]),
            _mean([s.peak_minor for s in sel]),
            _mean(onsets),
            _mean([s.analysis.clog_total_ticks for s in sel]),
        ])
    return buf.getvalue()
