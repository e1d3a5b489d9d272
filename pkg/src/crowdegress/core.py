"""World lattice, agents, scenarios and the geometry shared by every module.

Coordinates are ``(x, y)`` integer pairs with ``y`` growing downwards, so the
row-major ``(y, x)`` order used for tie-breaking reads top-to-bottom,
left-to-right like the ASCII maps.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

Coord = tuple[int, int]

# One pace per tick; the gait speed is global, not a per-agent attribute.
GAIT_SPEED = 1


class CellKind(enum.Enum):
    WALL = "#"
    FREE = "."
    EXIT = "E"


class TargetRule(str, enum.Enum):
    NEAREST_TO_EXIT = "nearest_to_exit"
    NEAREST_TO_AGENT = "nearest_to_agent"


class ScenarioError(ValueError):
    """Raised for invalid worlds, scenarios and scenario documents."""


@dataclass
class GridWorld:
    width: int
    height: int
    kinds: list[list[CellKind]]  # kinds[y][x]
    occupancy: dict[Coord, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.width < 1 or self.height < 1:
            raise ScenarioError("world must be at least 1x1")
        if len(self.kinds) != self.height or any(len(r) != self.width for r in self.kinds):
            raise ScenarioError("inconsistent map width")

    @classmethod
    def from_rows(cls, rows: Sequence[str]) -> "GridWorld":
        """Build a world from map lines using ``#``, ``.`` and ``E``."""
        kinds = [[CellKind(ch) for ch in row] for row in rows]
        return cls(len(rows[0]) if rows else 0, len(rows), kinds)

    def in_bounds(self, cell: Coord) -> bool:
        x, y = cell
        return 0 <= x < self.width and 0 <= y < self.height

    def kind(self, cell: Coord) -> CellKind:
        x, y = cell
        return self.kinds[y][x]

    def cells(self) -> Iterable[Coord]:
        for y in range(self.height):
            for x in range(self.width):
                yield (x, y)

    def exit_cells(self) -> list[Coord]:
        return sorted((c for c in self.cells() if self.kind(c) is CellKind.EXIT), key=yx_key)

    def place(self, cell: Coord, agent_id: int) -> None:
        if not self.in_bounds(cell) or self.kind(cell) is CellKind.WALL:
            raise ScenarioError(f"cannot place agent {agent_id} on {cell}")
        if cell in self.occupancy:
            raise ScenarioError(f"cell {cell} already occupied by agent {self.occupancy[cell]}")
        self.occupancy[cell] = agent_id

    def copy(self) -> "GridWorld":
        return GridWorld(self.width, self.height, [row[:] for row in self.kinds], dict(self.occupancy))

    def rows(self) -> list[str]:
        return ["".join(k.value for k in row) for row in self.kinds]


@dataclass
class Agent:
    id: int
    pos: Coord
    heading: Optional[tuple[float, float]] = None
    exit_tick: Optional[int] = None  # None while Active

    @property
    def active(self) -> bool:
        return self.exit_tick is None


@dataclass(frozen=True)
class BehaviorParams:
    fov_radius: float = 3.0
    fov_half_angle: float = 90.0  # degrees
    exit_region_depth: int = 3
    target_rule: TargetRule = TargetRule.NEAREST_TO_EXIT

    def __post_init__(self) -> None:
        if not self.fov_radius > 0:
            raise ScenarioError("fov_radius must be positive")
        if not 0 < self.fov_half_angle <= 180:
            raise ScenarioError("fov_half_angle must be in (0, 180]")
        if self.exit_region_depth < 1:
            raise ScenarioError("exit_region_depth must be >= 1")
        object.__setattr__(self, "target_rule", TargetRule(self.target_rule))


@dataclass(frozen=True)
class Rect:
    """Inclusive axis-aligned cell rectangle."""

    x0: int
    y0: int
    x1: int
    y1: int

    def cells(self) -> list[Coord]:
        return [(x, y) for y in range(self.y0, self.y1 + 1) for x in range(self.x0, self.x1 + 1)]

    def __contains__(self, cell: Coord) -> bool:
        x, y = cell
        return self.x0 <= x <= self.x1 and self.y0 <= y <= self.y1


@dataclass
class Scenario:
    world: GridWorld
    exits: list[Coord]
    spawn_region: Optional[Rect]
    crowd_size: int = 400
    params: BehaviorParams = field(default_factory=BehaviorParams)
    seed: int = 0
    max_ticks: int = 10_000

    def __post_init__(self) -> None:
        self.exits = sorted(self.exits, key=yx_key)
        self.validate()

    def spawn_cells(self) -> list[Coord]:
        if self.spawn_region is None:
            return []
        return [c for c in self.spawn_region.cells()
                if self.world.in_bounds(c) and self.world.kind(c) is CellKind.FREE]

    def validate(self) -> None:
        if self.exits != self.world.exit_cells():
            raise ScenarioError("exits must be exactly the Exit cells of the world")
        if self.crowd_size < 0:
            raise ScenarioError("crowd_size must be >= 0")
        if not 0 <= self.seed < 2**64:
            raise ScenarioError("seed must be a 64-bit unsigned integer")
        if self.max_ticks < 1:
            raise ScenarioError("max_ticks must be >= 1")
        if self.crowd_size > 0 and not self.exits:
            raise ScenarioError("no exits defined")
        if len(self.spawn_cells()) < self.crowd_size:
            raise ScenarioError("spawn overflow")


def yx_key(cell: Coord) -> Coord:
    return (cell[1], cell[0])


def euclidean_distance(a: Coord, b: Coord) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


def dist2(a: Coord, b: Coord) -> int:
    """Squared distance; exact on the lattice, so safe for ordering and ties."""
    dx = a[0] - b[0]
    dy = a[1] - b[1]
    return dx * dx + dy * dy


def chebyshev(a: Coord, b: Coord) -> int:
    return max(abs(a[0] - b[0]), abs(a[1] - b[1]))


def nearest_exit(pos: Coord, exits: Iterable[Coord]) -> Coord:
    """Closest exit to ``pos``; ties go to the smallest ``y`` then ``x``."""
    best = None
    best_key = None
    for e in exits:
        key = (dist2(pos, e), e[1], e[0])
        if best_key is None or key < best_key:
            best, best_key = e, key
    if best is None:
        raise ScenarioError("no exits defined")
    return best


def is_free(world: GridWorld, cell: Coord) -> bool:
    return (world.in_bounds(cell)
            and world.kind(cell) is not CellKind.WALL
            and cell not in world.occupancy)


@dataclass(frozen=True)
class ExitGroup:
    """A contiguous run of exit cells and the direction pointing into the room."""

    cells: tuple[Coord, ...]
    flow_axis: Coord  # unit lattice vector from the door into the room

    @property
    def lateral_axis(self) -> Coord:
        fx, fy = self.flow_axis
        return (-fy, fx)

    @property
    def center(self) -> tuple[float, float]:
        n = len(self.cells)
        return (sum(c[0] for c in self.cells) / n, sum(c[1] for c in self.cells) / n)

    def depth(self, cell: Coord) -> float:
        """Projection of ``cell - center`` on the flow axis (0 on the door line)."""
        cx, cy = self.center
        return (cell[0] - cx) * self.flow_axis[0] + (cell[1] - cy) * self.flow_axis[1]

    def lateral(self, cell: Coord) -> float:
        cx, cy = self.center
        lx, ly = self.lateral_axis
        return (cell[0] - cx) * lx + (cell[1] - cy) * ly


_AXES: tuple[Coord, ...] = ((0, 1), (0, -1), (1, 0), (-1, 0))


def _inward_axis(world: GridWorld, cells: Sequence[Coord]) -> Coord:
    # The inward side is walkable, the outward side is wall or off-map.
    def score(axis: Coord) -> int:
        s = 0
        for x, y in cells:
            ahead = (x + axis[0], y + axis[1])
            behind = (x - axis[0], y - axis[1])
            if world.in_bounds(ahead) and world.kind(ahead) is not CellKind.WALL:
                s += 2
            if not world.in_bounds(behind) or world.kind(behind) is CellKind.WALL:
                s += 1
        return s

    return max(_AXES, key=score)  # first axis wins ties


def exit_groups(world: GridWorld, exits: Sequence[Coord]) -> list[ExitGroup]:
    """Split the exit set into 8-connected runs, ordered by their first cell."""
    remaining = set(exits)
    groups = []
    for start in sorted(exits, key=yx_key):
        if start not in remaining:
            continue
        remaining.discard(start)
        stack, members = [start], [start]
        while stack:
            x, y = stack.pop()
            for dy in (-1, 0, 1):
                for dx in (-1, 0, 1):
                    n = (x + dx, y + dy)
                    if n in remaining:
                        remaining.discard(n)
                        stack.append(n)
                        members.append(n)
        members.sort(key=yx_key)
        groups.append(ExitGroup(tuple(members), _inward_axis(world, members)))
    return groups


def main_exit_group(world: GridWorld, exits: Sequence[Coord]) -> Optional[ExitGroup]:
    """The widest exit group (first in (y, x) order on ties), or None without exits."""
    groups = exit_groups(world, exits)
    if not groups:
        return None
    return max(groups, key=lambda g: len(g.cells))
