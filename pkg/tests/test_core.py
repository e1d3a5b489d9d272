import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from crowdegress.core import (
    BehaviorParams,
    CellKind,
    GridWorld,
    Rect,
    Scenario,
    ScenarioError,
    euclidean_distance,
    exit_groups,
    is_free,
    main_exit_group,
    nearest_exit,
)

coords = st.tuples(st.integers(-50, 50), st.integers(-50, 50))


@pytest.mark.parametrize("a, b, expected", [
    ((0, 0), (0, 0), 0.0),
    ((0, 0), (3, 4), 5.0),
    ((2, 1), (0, 0), math.sqrt(5)),
])
def test_euclidean_distance(a, b, expected):
    assert euclidean_distance(a, b) == pytest.approx(expected, abs=1e-12)


@given(coords, coords)
def test_distance_symmetric_and_zero_iff_equal(a, b):
    assert euclidean_distance(a, b) == euclidean_distance(b, a)
    assert (euclidean_distance(a, b) == 0) == (a == b)


@pytest.mark.parametrize("pos, exits, expected", [
    ((5, 5), [(5, 0)], (5, 0)),
    ((2, 1), [(0, 0), (4, 4)], (0, 0)),
    ((0, 0), [(3, 0), (0, 3)], (3, 0)),
    ((0, 0), [(0, 3), (3, 0)], (3, 0)),
])
def test_nearest_exit(pos, exits, expected):
    assert nearest_exit(pos, exits) == expected


def test_nearest_exit_empty():
    with pytest.raises(ScenarioError, match="no exits defined"):
        nearest_exit((0, 0), [])


@given(coords, st.lists(coords, min_size=1, max_size=8, unique=True), st.randoms(use_true_random=False))
def test_nearest_exit_permutation_invariant(pos, exits, rnd):
    shuffled = list(exits)
    rnd.shuffle(shuffled)
    assert nearest_exit(pos, exits) == nearest_exit(pos, shuffled)


def test_is_free():
    world = GridWorld.from_rows(["#E#", "#..", "..."])
    world.place((1, 1), 7)
    assert not is_free(world, (0, 0))      # wall
    assert is_free(world, (1, 0))          # exit cells are walkable
    assert not is_free(world, (1, 1))      # another agent
    assert is_free(world, (2, 1))
    assert not is_free(world, (-1, 0))
    assert not is_free(world, (3, 2))


def test_place_rejects_walls_and_double_occupancy():
    world = GridWorld.from_rows(["#.", ".."])
    with pytest.raises(ScenarioError):
        world.place((0, 0), 1)
    world.place((1, 0), 1)
    with pytest.raises(ScenarioError):
        world.place((1, 0), 2)


def test_scenario_invariants():
    world = GridWorld.from_rows(["#E#", "#.#", "#.#"])
    s = Scenario(world, [(1, 0)], Rect(1, 1, 1, 2), crowd_size=2)
    assert s.spawn_cells() == [(1, 1), (1, 2)]
    with pytest.raises(ScenarioError, match="spawn overflow"):
        Scenario(world, [(1, 0)], Rect(1, 1, 1, 2), crowd_size=3)
    with pytest.raises(ScenarioError, match="Exit cells"):
        Scenario(world, [(1, 1)], Rect(1, 1, 1, 2), crowd_size=1)
    with pytest.raises(ScenarioError, match="no exits"):
        Scenario(GridWorld.from_rows(["..", ".."]), [], Rect(0, 0, 1, 1), crowd_size=1)
    with pytest.raises(ScenarioError):
        Scenario(world, [(1, 0)], Rect(1, 1, 1, 2), crowd_size=1, seed=2**64)


@pytest.mark.parametrize("kwargs", [
    {"fov_radius": 0.0}, {"fov_half_angle": 0.0}, {"fov_half_angle": 181.0}, {"exit_region_depth": 0},
])
def test_behavior_params_validation(kwargs):
    with pytest.raises(ScenarioError):
        BehaviorParams(**kwargs)


def test_exit_groups_and_flow_axes():
    world = GridWorld.from_rows([
        "###EE###",
        "#......#",
        "#......E",
        "#......#",
        "##E#####",
    ])
    groups = exit_groups(world, world.exit_cells())
    assert [g.cells for g in groups] == [((3, 0), (4, 0)), ((7, 2),), ((2, 4),)]
    assert [g.flow_axis for g in groups] == [(0, 1), (-1, 0), (0, -1)]
    assert main_exit_group(world, world.exit_cells()).cells == ((3, 0), (4, 0))
    top = groups[0]
    assert top.center == (3.5, 0.0)
    assert top.depth((3, 2)) == 2.0
    assert top.lateral((5, 1)) == pytest.approx(-1.5)


def test_cell_kinds_cover_every_cell():
    world = GridWorld.from_rows(["#E.", "..#"])
    assert {world.kind(c) for c in world.cells()} <= set(CellKind)
    assert world.exit_cells() == [(1, 0)]
