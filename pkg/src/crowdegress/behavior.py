"""Per-agent decision rules: heading, field of vision, target choice, one pace.

Every function here is pure. The engine calls them (or equivalent cached
tables) sequentially against the occupancy as mutated so far in the tick.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .core import (
    BehaviorParams,
    Coord,
    GridWorld,
    ScenarioError,
    TargetRule,
    dist2,
    euclidean_distance,
    is_free,
    nearest_exit,
)

NEIGHBOR_OFFSETS: tuple[Coord, ...] = tuple(
    (dx, dy) for dy in (-1, 0, 1) for dx in (-1, 0, 1) if (dx, dy) != (0, 0)
)

# Slack on the sector's angular edge so cells exactly on it (e.g. lateral
# cells at 90 degrees) survive floating-point rounding.
_ANGLE_EPS = 1e-9


@dataclass(frozen=True)
class Decision:
    kind: str  # "move", "stop" or "exit"
    cell: Optional[Coord] = None

    @classmethod
    def move(cls, cell: Coord) -> "Decision":
        return cls("move", cell)


STOP = Decision("stop")
EXIT = Decision("exit")


def compute_heading(pos: Coord, exits: Iterable[Coord]) -> tuple[float, float]:
    """Unit vector from ``pos`` towards its nearest exit."""
    e = nearest_exit(pos, exits)
    dx, dy = e[0] - pos[0], e[1] - pos[1]
    norm = math.hypot(dx, dy)
    if norm == 0:
        raise ScenarioError("agent already at exit")
    return (dx / norm, dy / norm)


def in_sector(offset: Coord, heading: tuple[float, float], radius: float, half_angle: float) -> bool:
    dx, dy = offset
    r = math.hypot(dx, dy)
    if r == 0 or r > radius:
        return False
    if half_angle >= 180:
        return True
    cos_angle = (dx * heading[0] + dy * heading[1]) / r
    return cos_angle >= math.cos(math.radians(half_angle)) - _ANGLE_EPS


def field_of_vision(pos: Coord, heading: tuple[float, float], params: BehaviorParams,
                    world: GridWorld) -> list[Coord]:
    """In-bounds cells of the circular sector around ``heading``, ordered by (y, x).

    Walls and occupied cells are kept; :func:`choose_target` filters them.
    """
    reach = int(math.floor(params.fov_radius))
    px, py = pos
    cells = []
    for y in range(max(0, py - reach), min(world.height, py + reach + 1)):
        for x in range(max(0, px - reach), min(world.width, px + reach + 1)):
            if in_sector((x - px, y - py), heading, params.fov_radius, params.fov_half_angle):
                cells.append((x, y))
    return cells


def target_key(cell: Coord, pos: Coord, goal: Coord, rule: TargetRule = TargetRule.NEAREST_TO_EXIT):
    if rule is TargetRule.NEAREST_TO_AGENT:
        return (dist2(cell, pos), dist2(cell, goal), cell[1], cell[0])
    return (dist2(cell, goal), dist2(cell, pos), cell[1], cell[0])


def choose_target(pos: Coord, fov: Sequence[Coord], world: GridWorld, exits: Iterable[Coord],
                  rule: TargetRule = TargetRule.NEAREST_TO_EXIT) -> Optional[Coord]:
    """The free FOV cell closest to the agent's nearest exit, or None to stop.

    With ``rule=NEAREST_TO_AGENT`` the primary and secondary keys swap.
    """
    goal = nearest_exit(pos, exits)
    free = [c for c in fov if is_free(world, c)]
    if not free:
        return None
    return min(free, key=lambda c: target_key(c, pos, goal, rule))


def step_toward(pos: Coord, target: Coord, world: GridWorld) -> Optional[Coord]:
    """One pace: the free 8-neighbour closest to ``target``, ties by (y, x)."""
    best = None
    best_key = None
    for dx, dy in NEIGHBOR_OFFSETS:
        n = (pos[0] + dx, pos[1] + dy)
        if not is_free(world, n):
            continue
        key = (dist2(n, target), n[1], n[0])
        if best_key is None or key < best_key:
            best, best_key = n, key
    return best


def has_exited(pos: Coord, exits: Iterable[Coord]) -> bool:
    return euclidean_distance(pos, nearest_exit(pos, exits)) < 1


def decide(pos: Coord, world: GridWorld, exits: Sequence[Coord], params: BehaviorParams) -> Decision:
    """Full decision for one agent turn against the current occupancy."""
    if has_exited(pos, exits):
        return EXIT
    heading = compute_heading(pos, exits)
    fov = field_of_vision(pos, heading, params, world)
    target = choose_target(pos, fov, world, exits, params.target_rule)
    if target is None:
        return STOP
    nxt = step_toward(pos, target, world)
    return STOP if nxt is None else Decision.move(nxt)

