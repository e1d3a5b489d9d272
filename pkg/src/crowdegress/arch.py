"""Crowd-front arch measurement: component extraction, axes, double arches, onset."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Collection, Optional, Sequence

from .core import Coord, ExitGroup

if TYPE_CHECKING:
    from .engine import SimState


@dataclass(frozen=True)
class ArchMeasurement:
    tick: int
    major_axis_len: float
    minor_axis_len: float
    component_size: int
    depth_profile: tuple[tuple[int, float], ...] = ()  # (lateral offset, front depth)
    double_arch: bool = False
    histogram: tuple[int, ...] = field(default=(), compare=False)


def crowd_component(occupied, exits: Collection[Coord]) -> set[Coord]:
    """Agent cells 8-connected, through agent cells, to an agent touching an exit.

    ``occupied`` may be a SimState, its occupancy mapping, or any set of cells.
    """
    if hasattr(occupied, "world"):
        occupied = occupied.world.occupancy
    exit_set = set(exits)
    seeds = [c for c in occupied
             if any((c[0] + dx, c[1] + dy) in exit_set for dx in (-1, 0, 1) for dy in (-1, 0, 1))]
    seen = set(seeds)
    stack = list(seeds)
    while stack:
        x, y = stack.pop()
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                n = (x + dx, y + dy)
                if n not in seen and n in occupied:
                    seen.add(n)
                    stack.append(n)
    return seen


def _project(cell: Sequence[float], center: Sequence[float], axis: Sequence[float]) -> float:
    return (cell[0] - center[0]) * axis[0] + (cell[1] - center[1]) * axis[1]


def arch_axes(component: Collection[Coord], exit_center: Sequence[float],
              flow_axis: Sequence[float]) -> tuple[float, float]:
    """(major, minor) extents of the crowd front.

    major is the deepest flow-axis projection plus one cell; minor is the
    lateral extent of the cells on the door line (projection below 1).
    """
    if not component:
        return (0.0, 0.0)
    lateral_axis = (-flow_axis[1], flow_axis[0])
    major = max(_project(c, exit_center, flow_axis) for c in component) + 1.0
    band = [_project(c, exit_center, lateral_axis) for c in component
            if _project(c, exit_center, flow_axis) < 1]
    minor = (max(band) - min(band) + 1.0) if band else 0.0
    return (float(major), float(minor))


def depth_histogram(component: Collection[Coord], exit_center: Sequence[float],
                    flow_axis: Sequence[float]) -> list[int]:
    """Agent counts per integer depth row, index 0 on the door line."""
    depths = [round(_project(c, exit_center, flow_axis)) for c in component]
    depths = [d for d in depths if d >= 0]
    if not depths:
        return []
    hist = [0] * (max(depths) + 1)
    for d in depths:
        hist[d] += 1
    return hist


def local_maxima(hist: Sequence[float]) -> list[int]:
    """Indices of local maxima; a flat top counts once (at its first index).

    Values beyond either end count as zero.
    """
    peaks = []
    n = len(hist)
    i = 0
    while i < n:
        j = i
        while j + 1 < n and hist[j + 1] == hist[i]:
            j += 1
        left = hist[i - 1] if i > 0 else 0
        right = hist[j + 1] if j + 1 < n else 0
        if hist[i] > 0 and hist[i] > left and hist[i] > right:
            peaks.append(i)
        i = j + 1
    return peaks


def has_double_peak(hist: Sequence[float], valley_fraction: float = 0.5) -> bool:
    if not 0 < valley_fraction < 1:
        raise ValueError("valley_fraction must be in (0, 1)")
    peaks = local_maxima(hist)
    for a, p1 in enumerate(peaks):
        for p2 in peaks[a + 1:]:
            valley = min(hist[p1:p2 + 1])
            if valley <= valley_fraction * min(hist[p1], hist[p2]):
                return True
    return False


def count_modes(hist: Sequence[float], valley_fraction: float = 0.5) -> int:
    """Number of modes once peaks without a deep enough valley between them are merged."""
    modes: list[int] = []
    for p in local_maxima(hist):
        if modes:
            prev = modes[-1]
            if min(hist[prev:p + 1]) > valley_fraction * min(hist[prev], hist[p]):
                if hist[p] > hist[prev]:
                    modes[-1] = p
                continue
        modes.append(p)
    return len(modes)


def detect_double_arch(state: "SimState", exits: Collection[Coord], flow_axis: Sequence[float],
                       valley_fraction: float = 0.5, exit_center: Optional[Sequence[float]] = None) -> bool:
    if exit_center is None:
        n = len(exits)
        exit_center = (sum(c[0] for c in exits) / n, sum(c[1] for c in exits) / n) if n else (0.0, 0.0)
    comp = crowd_component(state.world.occupancy, exits)
    return has_double_peak(depth_histogram(comp, exit_center, flow_axis), valley_fraction)


def measure(tick: int, occupied: Collection[Coord], exits: Collection[Coord], group: Optional[ExitGroup],
            valley_fraction: float = 0.5) -> ArchMeasurement:
    """Full per-tick arch record against the main exit group."""
    if group is None:
        return ArchMeasurement(tick, 0.0, 0.0, 0)
    comp = crowd_component(occupied, exits)
    center, axis = group.center, group.flow_axis
    major, minor = arch_axes(comp, center, axis)
    hist = depth_histogram(comp, center, axis)
    front: dict[int, float] = {}
    for c in comp:
        lat = round(group.lateral(c))
        front[lat] = max(front.get(lat, 0.0), group.depth(c) + 1.0)
    return ArchMeasurement(
        tick=tick,
        major_axis_len=major,
        minor_axis_len=minor,
        component_size=len(comp),
        depth_profile=tuple(sorted(front.items())),
        double_arch=has_double_peak(hist, valley_fraction),
        histogram=tuple(hist),
    )


def arch_onset(measurements: Sequence[ArchMeasurement], min_component: int = 50,
               persist: int = 20) -> Optional[int]:
    """First tick from which component_size stays >= min_component for ``persist`` ticks."""
    if persist < 1:
        raise ValueError("persist must be >= 1")
    run = 0
    for i, m in enumerate(measurements):
        run = run + 1 if m.component_size >= min_component else 0
        if run >= persist:
            return measurements[i - persist + 1].tick
    return None


def peak_axes(measurements: Sequence[ArchMeasurement]) -> tuple[float, float]:
    if not measurements:
        return (0.0, 0.0)
    return (max(m.major_axis_len for m in measurements), max(m.minor_axis_len for m in measurements))


def double_arch_runs(measurements: Sequence[ArchMeasurement], min_len: int = 10) -> list[tuple[int, int]]:
    """Tick intervals where the double-arch flag holds for ``min_len`` consecutive ticks."""
    out = []
    start = None
    for i, m in enumerate(measurements):
        if m.double_arch and start is None:
            start = i
        if not m.double_arch and start is not None:
            if i - start >= min_len:
                out.append((measurements[start].tick, measurements[i - 1].tick))
            start = None
    if start is not None and len(measurements) - start >= min_len:
        out.append((measurements[start].tick, measurements[-1].tick))
    return out
