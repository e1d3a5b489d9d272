"""Simulation loop: seeded spawning, shuffled sequential turns, exits, replay.

Randomness comes from a single ``random.Random`` (MT19937) per run, seeded
with the scenario seed. It draws the spawn sample first and then one
Fisher-Yates shuffle (``Random.shuffle``) of the active agents per tick.
Nothing else consumes it, so a scenario fully determines a run.

The per-tick hot loop runs on tables cached from the world geometry. These
are equivalent to the pure functions in :mod:`crowdegress.behavior`, and
the test suite checks the two routes against each other.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from . import arch as arch_mod
from .arch import ArchMeasurement
from .behavior import NEIGHBOR_OFFSETS, compute_heading, field_of_vision, target_key
from .core import (
    Agent,
    BehaviorParams,
    CellKind,
    Coord,
    GridWorld,
    Scenario,
    ScenarioError,
    main_exit_group,
    nearest_exit,
)
from .metrics import MetricsLog, MetricsRow, exit_region


class Geometry:
    """Per-cell lookups that depend only on walls, exits and behaviour params."""

    def __init__(self, world: GridWorld, exits: Sequence[Coord], params: BehaviorParams):
        self.exits = tuple(exits)
        self.exit_set = frozenset(exits)
        self.heading: dict[Coord, tuple[float, float]] = {}
        self.candidates: dict[Coord, tuple[Coord, ...]] = {}
        self.neighbors: dict[Coord, tuple[Coord, ...]] = {}
        for cell in world.cells():
            if world.kind(cell) is CellKind.WALL:
                continue
            # neighbours stay in (y, x) order so a strict < keeps the tie-break
            self.neighbors[cell] = tuple(
                n for n in ((cell[0] + dx, cell[1] + dy) for dx, dy in NEIGHBOR_OFFSETS)
                if world.in_bounds(n) and world.kind(n) is not CellKind.WALL
            )
            if not self.exits or cell in self.exit_set:
                continue
            h = compute_heading(cell, self.exits)
            goal = nearest_exit(cell, self.exits)
            self.heading[cell] = h
            fov = [c for c in field_of_vision(cell, h, params, world) if world.kind(c) is not CellKind.WALL]
            fov.sort(key=lambda c: target_key(c, cell, goal, params.target_rule))
            self.candidates[cell] = tuple(fov)
        self.group = main_exit_group(world, self.exits)
        self.region = frozenset(exit_region(world, self.exits, params.exit_region_depth)) if self.exits else frozenset()


@dataclass
class SimState:
    world: GridWorld
    agents: list[Agent]
    rng: random.Random
    geometry: Geometry = field(repr=False)
    tick: int = 0
    exited_total: int = 0
    exits_last_tick: int = 0

    @property
    def exits(self) -> tuple[Coord, ...]:
        return self.geometry.exits

    def active_agents(self) -> list[Agent]:
        return [a for a in self.agents if a.active]

    @property
    def active_count(self) -> int:
        return len(self.agents) - self.exited_total

    def positions(self) -> dict[int, Coord]:
        return {a.id: a.pos for a in self.agents if a.active}


def spawn(scenario: Scenario) -> SimState:
    """Place the crowd uniformly without replacement on the spawn region's free cells."""
    cells = scenario.spawn_cells()
    if len(cells) < scenario.crowd_size:
        raise ScenarioError("spawn overflow")
    rng = random.Random(scenario.seed)
    world = scenario.world.copy()
    world.occupancy.clear()
    geometry = Geometry(world, scenario.exits, scenario.params)
    agents = []
    for i, cell in enumerate(rng.sample(cells, scenario.crowd_size)):
        world.place(cell, i)
        agents.append(Agent(i, cell, geometry.heading.get(cell)))
    return SimState(world, agents, rng, geometry)


def state_from_positions(world: GridWorld, positions: Sequence[Coord], params: BehaviorParams = BehaviorParams(),
                         seed: int = 0) -> SimState:
    """A state with agent ``i`` at ``positions[i]``, bypassing the spawn draw."""
    world = world.copy()
    world.occupancy.clear()
    exits = world.exit_cells()
    geometry = Geometry(world, exits, params)
    agents = []
    for i, cell in enumerate(positions):
        world.place(cell, i)
        agents.append(Agent(i, cell, geometry.heading.get(cell)))
    return SimState(world, agents, random.Random(seed), geometry)


def tick(state: SimState, order: Optional[Sequence[int]] = None) -> SimState:
    """Advance one tick in place and return the state.

    Active agents act one at a time in a freshly shuffled order (or in
    ``order``, a sequence of agent ids, when given). Each sees the occupancy
    left by those before it; an agent on an exit cell leaves at the start
    of its turn and frees the cell for later agents.
    """
    geo = state.geometry
    occ = state.world.occupancy
    exit_set = geo.exit_set
    candidates = geo.candidates
    neighbors = geo.neighbors
    headings = geo.heading
    now = state.tick + 1

    if order is None:
        turn = [a for a in state.agents if a.exit_tick is None]
        state.rng.shuffle(turn)
    else:
        turn = [state.agents[i] for i in order]

    exited = 0
    for agent in turn:
        pos = agent.pos
        if pos in exit_set:
            agent.exit_tick = now
            agent.heading = None
            del occ[pos]
            exited += 1
            continue
        target = None
        for c in candidates[pos]:
            if c not in occ:
                target = c
                break
        if target is None:
            continue
        tx, ty = target
        best = None
        best_d = None
        for n in neighbors[pos]:
            if n in occ:
                continue
            dx = n[0] - tx
            dy = n[1] - ty
            d = dx * dx + dy * dy
            if best_d is None or d < best_d:
                best, best_d = n, d
        if best is None:
            continue
        del occ[pos]
        occ[best] = agent.id
        agent.pos = best
        agent.heading = headings.get(best)

    state.exited_total += exited
    state.exits_last_tick = exited
    state.tick = now
    return state


def record(state: SimState) -> tuple[MetricsRow, ArchMeasurement]:
    occ = state.world.occupancy
    density = sum(1 for c in state.geometry.region if c in occ)
    row = MetricsRow(state.tick, density, state.exits_last_tick, state.exited_total, state.active_count)
    return row, arch_mod.measure(state.tick, occ, state.exits, state.geometry.group)


@dataclass
class RunResult:
    state: SimState
    log: MetricsLog
    arches: list[ArchMeasurement]

    def __iter__(self):
        return iter((self.state, self.log, self.arches))


def run(scenario: Scenario, on_tick: Optional[Callable[[SimState], None]] = None) -> RunResult:
    """Tick until everyone has exited or ``max_ticks`` is reached, logging each tick.

    ``on_tick`` is called with the state after spawning (tick 0) and after
    every tick; it must not mutate the state.
    """
    state = spawn(scenario)
    log = MetricsLog(scenario.crowd_size)
    arches: list[ArchMeasurement] = []
    if on_tick is not None:
        on_tick(state)
    while state.active_count > 0 and state.tick < scenario.max_ticks:
        tick(state)
        row, am = record(state)
        log.rows.append(row)
        arches.append(am)
        if on_tick is not None:
            on_tick(state)
    return RunResult(state, log, arches)


def occupancy_ok(state: SimState) -> bool:
    """Occupancy is a bijection onto active agents and avoids walls."""
    occ = state.world.occupancy
    active = state.active_agents()
    if len(occ) != len(active):
        return False
    for a in active:
        if occ.get(a.pos) != a.id or state.world.kind(a.pos) is CellKind.WALL:
            return False
    return True

