"""Run summaries, CSV/ASCII writers and the threshold bundle shared by the CLI."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from .arch import ArchMeasurement, arch_onset, peak_axes
from .core import GridWorld
from .metrics import (
    DegenerateSeries,
    Interval,
    MetricsLog,
    burstiness_index,
    default_min_density,
    detect_calm,
    detect_clogging,
)

ARCH_COLUMNS = ("tick", "major_axis_len", "minor_axis_len", "component_size", "double_arch")


@dataclass(frozen=True)
class Thresholds:
    clog_min_window: int = 20
    clog_min_density: int = 1
    calm_window: int = 20
    calm_max_range: int = 2
    onset_min_component: int = 50
    onset_persist: int = 20

    @classmethod
    def for_region(cls, region_size: int, **overrides) -> "Thresholds":
        """Defaults with the clogging density pinned to half the exit region."""
        overrides.setdefault("clog_min_density", default_min_density(region_size))
        return cls(**overrides)


def fmt_float(v: float) -> str:
    return f"{v:.6f}"


def fmt_intervals(intervals: Sequence[Interval]) -> str:
    return ";".join(f"{a}-{b}" for a, b in intervals) if intervals else "none"


def parse_intervals(text: str) -> list[Interval]:
    if text == "none":
        return []
    out = []
    for part in text.split(";"):
        a, _, b = part.partition("-")
        out.append((int(a), int(b)))
    return out


def safe_burstiness(series: Sequence[float]) -> Optional[float]:
    try:
        return burstiness_index(series)
    except DegenerateSeries:
        return None


@dataclass(frozen=True)
class LogAnalysis:
    burstiness: Optional[float]
    clog_intervals: list[Interval]
    calm_intervals: list[Interval]

    @property
    def clog_total_ticks(self) -> int:
        return sum(b - a + 1 for a, b in self.clog_intervals)

    def lines(self) -> list[str]:
        b = "degenerate" if self.burstiness is None else fmt_float(self.burstiness)
        return [
            f"burstiness_index={b}",
            f"clog_intervals={fmt_intervals(self.clog_intervals)}",
            f"calm_intervals={fmt_intervals(self.calm_intervals)}",
        ]


def analyze_log(log: MetricsLog, th: Thresholds) -> LogAnalysis:
    return LogAnalysis(
        burstiness=safe_burstiness(log.column("exits_this_tick")),
        clog_intervals=detect_clogging(log, th.clog_min_window, th.clog_min_density),
        calm_intervals=detect_calm(log, th.calm_window, th.calm_max_range),
    )


@dataclass(frozen=True)
class RunSummary:
    total_egress_ticks: int
    all_exited: bool
    analysis: LogAnalysis
    arch_onset_tick: Optional[int]
    peak_major: float
    peak_minor: float
    thresholds: Thresholds

    def to_text(self) -> str:
        onset = "none" if self.arch_onset_tick is None else str(self.arch_onset_tick)
        th = self.thresholds
        lines = [
            f"total_egress_ticks={self.total_egress_ticks}",
            f"all_exited={int(self.all_exited)}",
            *self.analysis.lines(),
            f"arch_onset_tick={onset}",
            f"peak_major={fmt_float(self.peak_major)}",
            f"peak_minor={fmt_float(self.peak_minor)}",
            f"clog_min_window={th.clog_min_window}",
            f"clog_min_density={th.clog_min_density}",
            f"calm_window={th.calm_window}",
            f"calm_max_range={th.calm_max_range}",
        ]
        return "\n".join(lines) + "\n"


def summarize(log: MetricsLog, arches: Sequence[ArchMeasurement], th: Thresholds) -> RunSummary:
    last = log.rows[-1] if log.rows else None
    major, minor = peak_axes(arches)
    return RunSummary(
        total_egress_ticks=last.tick if last else 0,
        all_exited=last is None or last.active_count == 0,
        analysis=analyze_log(log, th),
        arch_onset_tick=arch_onset(arches, th.onset_min_component, th.onset_persist),
        peak_major=major,
        peak_minor=minor,
        thresholds=th,
    )


def read_summary(text: str) -> dict[str, str]:
    out = {}
    for line in text.splitlines():
        if "=" in line:
            k, _, v = line.partition("=")
            out[k.strip()] = v.strip()
    return out


def arch_csv(arches: Sequence[ArchMeasurement]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(ARCH_COLUMNS)
    for m in arches:
        w.writerow([m.tick, fmt_float(m.major_axis_len), fmt_float(m.minor_axis_len),
                    m.component_size, int(m.double_arch)])
    return buf.getvalue()


def render_frame(world: GridWorld) -> str:
    rows = []
    for y, kinds in enumerate(world.kinds):
        rows.append("".join("o" if (x, y) in world.occupancy else k.value for x, k in enumerate(kinds)))
    return "\n".join(rows) + "\n"


def write_text(path: Path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)

