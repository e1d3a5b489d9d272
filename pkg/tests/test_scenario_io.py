import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crowdegress.core import GridWorld, Rect, Scenario, ScenarioError
from crowdegress.scenario_io import (
    ScenarioParseError,
    make_corridor_scenario,
    parse_scenario,
    serialize_scenario,
)

from .parser_cases import ERROR_CASES, GOLDEN, TINY, fuzz_once


def test_twenty_goldens_present():
    assert len(GOLDEN) == 20


def test_parse_tiny_example():
    s = parse_scenario(TINY)
    world = GridWorld.from_rows(["#E#", "#.#", "#.#"])
    assert s == Scenario(world, [(1, 0)], Rect(1, 1, 1, 2), crowd_size=2)
    assert s.seed == 0 and s.max_ticks == 10000 and s.params.fov_radius == 3.0


def test_tiny_round_trip_and_idempotence():
    s = parse_scenario(TINY)
    text = serialize_scenario(s)
    assert parse_scenario(text) == s
    assert serialize_scenario(parse_scenario(text)) == text


def test_header_comments_and_blank_lines():
    text = "; comment\n\ncrowd_size = 2\n  ; another\n---\n#E#\n#s#\n#s#\n"
    assert parse_scenario(text) == parse_scenario(TINY)


def test_crlf_line_endings():
    assert parse_scenario(TINY.replace("\n", "\r\n")) == parse_scenario(TINY)


@pytest.mark.parametrize("path", GOLDEN, ids=lambda p: p.stem)
def test_golden_round_trip(path):
    text = path.read_text(encoding="utf-8")
    s = parse_scenario(text)
    assert serialize_scenario(s) == text
    assert parse_scenario(serialize_scenario(s)) == s


@pytest.mark.parametrize("text, message", ERROR_CASES)
def test_parse_errors(text, message):
    with pytest.raises(ScenarioParseError) as info:
        parse_scenario(text)
    assert info.value.message == message


def test_illegal_symbol_reports_line_and_column():
    with pytest.raises(ScenarioParseError) as info:
        parse_scenario("seed = 1\n---\n#E#\n#.X\n")
    assert (info.value.line, info.value.column) == (4, 3)


def test_default_corridor_serialization_has_crowd_400():
    text = serialize_scenario(make_corridor_scenario())
    assert "crowd_size = 400\n" in text.split("---")[0]


def test_corridor_geometry():
    s = make_corridor_scenario(19, 30, 3, 400, 1)
    assert (s.world.width, s.world.height) == (21, 32)
    assert s.exits == [(9, 0), (10, 0), (11, 0)]
    assert s.spawn_region.y1 == 30 and s.spawn_region.x0 == 1 and s.spawn_region.x1 == 19
    assert len(s.spawn_region.cells()) >= 400
    assert make_corridor_scenario(19, 30, 1, 400, 1).exits == [(10, 0)]


def test_corridor_small_crowd_uses_far_half():
    s = make_corridor_scenario(19, 30, 3, 100, 1)
    assert s.spawn_region == Rect(1, 16, 19, 30)


@pytest.mark.parametrize("args, message", [
    ((19, 30, 4, 400, 1), "exit width must be odd"),
    ((5, 30, 7, 10, 1), "exit exceeds corridor"),
])
def test_corridor_errors(args, message):
    with pytest.raises(ScenarioError, match=message):
        make_corridor_scenario(*args)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 9).map(lambda k: 2 * k - 1), st.integers(9, 21), st.integers(3, 25),
       st.integers(0, 60), st.integers(0, 2**32))
def test_corridor_always_valid_and_round_trips(exit_w, width, length, crowd, seed):
    if exit_w > width or crowd > width * length:
        return
    s = make_corridor_scenario(width, length, exit_w, crowd, seed)
    assert parse_scenario(serialize_scenario(s)) == s


def test_fuzz_short():
    rng = random.Random(7)
    seeds = [TINY] + [p.read_text(encoding="utf-8") for p in GOLDEN if p.stat().st_size < 400]
    outcomes = {fuzz_once(rng, seeds) for _ in range(500)}
    assert outcomes == {"ok", "error"}
