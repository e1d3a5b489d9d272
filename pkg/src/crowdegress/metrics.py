"""Exit-door density series, burstiness, clogging and calm detection."""

from __future__ import annotations

import csv
import io
import math
import statistics
from dataclasses import astuple, dataclass, field, fields
from typing import Sequence

from .core import CellKind, Coord, GridWorld, exit_groups, yx_key

Interval = tuple[int, int]


class DegenerateSeries(ValueError):
    pass


class SchemaError(ValueError):
    pass


@dataclass(frozen=True)
class MetricsRow:
    tick: int
    exit_region_density: int
    exits_this_tick: int
    cumulative_exits: int
    active_count: int


METRICS_COLUMNS = tuple(f.name for f in fields(MetricsRow))


@dataclass
class MetricsLog:
    crowd_size: int
    rows: list[MetricsRow] = field(default_factory=list)

    def column(self, name: str) -> list[int]:
        return [getattr(r, name) for r in self.rows]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(METRICS_COLUMNS)
        w.writerows(astuple(r) for r in self.rows)
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, crowd_size: int | None = None) -> "MetricsLog":
        reader = csv.reader(io.StringIO(text))
        header = next(reader, None)
        if header is None or tuple(h.strip() for h in header) != METRICS_COLUMNS:
            raise SchemaError("unrecognized metrics schema")
        rows = []
        for rec in reader:
            if not rec:
                continue
            if len(rec) != len(METRICS_COLUMNS):
                raise SchemaError("unrecognized metrics schema")
            try:
                rows.append(MetricsRow(*(int(v) for v in rec)))
            except ValueError:
                raise SchemaError("unrecognized metrics schema") from None
        if crowd_size is None:
            crowd_size = rows[0].active_count + rows[0].cumulative_exits if rows else 0
        return cls(crowd_size, rows)


def exit_region(world: GridWorld, exits: Sequence[Coord], depth: int) -> set[Coord]:
    """Exit cells plus ``depth`` rows just inside each door, one cell wider per side.

    Geometry only; wall cells are never included.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    region: set[Coord] = set(exits)
    for group in exit_groups(world, exits):
        lats = [round(group.lateral(c)) for c in group.cells]
        lo, hi = min(lats) - 1, max(lats) + 1
        for cell in world.cells():
            if world.kind(cell) is CellKind.WALL:
                continue
            d = round(group.depth(cell))
            if 1 <= d <= depth and lo <= round(group.lateral(cell)) <= hi:
                region.add(cell)
    return region


def sorted_region(region: set[Coord]) -> list[Coord]:
    return sorted(region, key=yx_key)


def burstiness_index(series: Sequence[float]) -> float:
    """(sigma - mu) / (sigma + mu) with the population standard deviation."""
    if not series or not any(series):
        raise DegenerateSeries("degenerate series")
    mu = statistics.fmean(series)
    sigma = statistics.pstdev(series)
    if sigma + mu == 0:
        raise DegenerateSeries("degenerate series")
    return (sigma - mu) / (sigma + mu)


def _runs(ticks: Sequence[int], ok: Sequence[bool], min_len: int) -> list[Interval]:
    out = []
    start = None
    prev = None
    for t, good in zip(ticks, ok):
        if good and start is not None and prev is not None and t == prev + 1:
            prev = t
            continue
        if start is not None and prev - start + 1 >= min_len:
            out.append((start, prev))
        start, prev = (t, t) if good else (None, None)
    if start is not None and prev - start + 1 >= min_len:
        out.append((start, prev))
    return out


def detect_clogging(log: MetricsLog, min_window: int = 20, min_density: int = 1) -> list[Interval]:
    """Maximal runs of at least ``min_window`` ticks with no exits and a crowded door."""
    if min_window < 1:
        raise ValueError("min_window must be >= 1")
    ticks = [r.tick for r in log.rows]
    ok = [r.exits_this_tick == 0 and r.exit_region_density >= min_density for r in log.rows]
    return _runs(ticks, ok, min_window)


def detect_calm(log: MetricsLog, window: int = 20, max_range: int = 2) -> list[Interval]:
    """Maximal runs of at least ``window`` ticks whose density spread is within ``max_range``.

    Runs are grown greedily from the left: an interval is extended while its
    max - min stays within ``max_range`` and agents remain active, and the
    next candidate starts where the previous one could not be extended.
    """
    if window < 2:
        raise ValueError("window must be >= 2")
    rows = log.rows
    out: list[Interval] = []
    i = 0
    n = len(rows)
    while i < n:
        if rows[i].active_count <= 0:
            i += 1
            continue
        lo = hi = rows[i].exit_region_density
        j = i + 1
        while j < n and rows[j].active_count > 0 and rows[j].tick == rows[j - 1].tick + 1:
            d = rows[j].exit_region_density
            nlo, nhi = min(lo, d), max(hi, d)
            if nhi - nlo > max_range:
                break
            lo, hi = nlo, nhi
            j += 1
        if j - i >= window:
            out.append((rows[i].tick, rows[j - 1].tick))
            i = j
        else:
            i += 1
    return out


def default_min_density(region_size: int) -> int:
    return max(1, math.ceil(region_size / 2))


def alternations(series: Sequence[int]) -> int:
    """Number of switches between zero and non-zero values."""
    return sum(1 for a, b in zip(series, series[1:]) if (a == 0) != (b == 0))
