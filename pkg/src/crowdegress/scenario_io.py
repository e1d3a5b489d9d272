"""Plain-text scenario documents: ``key = value`` header, ``---``, ASCII map.

Map symbols: ``#`` wall, ``.`` free, ``E`` exit, ``s`` free cell inside the
(rectangular) spawn region. Blank lines and ``;`` comments are allowed in
the header only.
"""

from __future__ import annotations

import math
from typing import Any, Callable

from .core import BehaviorParams, CellKind, GridWorld, Rect, Scenario, ScenarioError, TargetRule

SEPARATOR = "---"
SPAWN = "s"
_SYMBOLS = {"#": CellKind.WALL, ".": CellKind.FREE, "E": CellKind.EXIT, SPAWN: CellKind.FREE}

DEFAULTS: dict[str, Any] = {
    "seed": 0,
    "crowd_size": 400,
    "max_ticks": 10_000,
    "fov_radius": 3.0,
    "fov_half_angle_deg": 90.0,
    "exit_region_depth": 3,
    "target_rule": TargetRule.NEAREST_TO_EXIT.value,
}


class ScenarioParseError(ScenarioError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.message = message
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", column {column}" if column is not None else "") + ")"
        super().__init__(message + where)


def _int(v: str) -> int:
    return int(v, 10)


def _float(v: str) -> float:
    f = float(v)
    if not math.isfinite(f):
        raise ValueError(v)
    return f


def _rule(v: str) -> str:
    return TargetRule(v).value


_PARSERS: dict[str, Callable[[str], Any]] = {
    "seed": _int,
    "crowd_size": _int,
    "max_ticks": _int,
    "fov_radius": _float,
    "fov_half_angle_deg": _float,
    "exit_region_depth": _int,
    "target_rule": _rule,
}


def _parse_header(lines: list[str]) -> dict[str, Any]:
    values: dict[str, Any] = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith(";"):
            continue
        if "=" not in line:
            raise ScenarioParseError("malformed header line", lineno)
        key, _, value = (part.strip() for part in line.partition("="))
        if key not in _PARSERS:
            raise ScenarioParseError("unknown key", lineno)
        if key in values:
            raise ScenarioParseError("duplicate key", lineno)
        try:
            values[key] = _PARSERS[key](value)
        except ValueError:
            raise ScenarioParseError(f"invalid value for {key}", lineno) from None
    return values


def parse_scenario(text: str) -> Scenario:
    """Parse a scenario document; every failure is a :class:`ScenarioParseError`."""
    lines = text.replace("\r\n", "\n").replace("\r", "\n").split("\n")
    try:
        sep = next(i for i, ln in enumerate(lines) if ln.rstrip() == SEPARATOR)
    except StopIteration:
        raise ScenarioParseError("missing '---' separator") from None
    values = {**DEFAULTS, **_parse_header(lines[:sep])}

    map_lines = lines[sep + 1:]
    while map_lines and map_lines[-1] == "":
        map_lines.pop()
    first = sep + 2  # 1-based line number of the first map line
    if not map_lines or any(len(ln) != len(map_lines[0]) for ln in map_lines) or not map_lines[0]:
        raise ScenarioParseError("inconsistent map width", first)

    kinds = []
    spawn = []
    for y, row in enumerate(map_lines):
        out = []
        for x, ch in enumerate(row):
            kind = _SYMBOLS.get(ch)
            if kind is None:
                raise ScenarioParseError(f"illegal map symbol at ({x},{y})", first + y, x + 1)
            if ch == SPAWN:
                spawn.append((x, y))
            out.append(kind)
        kinds.append(out)

    region = None
    if spawn:
        xs = [c[0] for c in spawn]
        ys = [c[1] for c in spawn]
        region = Rect(min(xs), min(ys), max(xs), max(ys))
        if len(spawn) != len(region.cells()):
            raise ScenarioParseError("non-rectangular spawn region", first + region.y0)

    try:
        params = BehaviorParams(
            fov_radius=values["fov_radius"],
            fov_half_angle=values["fov_half_angle_deg"],
            exit_region_depth=values["exit_region_depth"],
            target_rule=TargetRule(values["target_rule"]),
        )
        world = GridWorld(len(map_lines[0]), len(map_lines), kinds)
        return Scenario(
            world=world,
            exits=world.exit_cells(),
            spawn_region=region,
            crowd_size=values["crowd_size"],
            params=params,
            seed=values["seed"],
            max_ticks=values["max_ticks"],
        )
    except ScenarioParseError:
        raise
    except ScenarioError as exc:
        raise ScenarioParseError(str(exc)) from None


def _fmt_float(v: float) -> str:
    return repr(float(v))


def serialize_scenario(s: Scenario) -> str:
    """Canonical text form; ``parse_scenario`` inverts it exactly."""
    header = {
        "crowd_size": str(s.crowd_size),
        "exit_region_depth": str(s.params.exit_region_depth),
        "fov_half_angle_deg": _fmt_float(s.params.fov_half_angle),
        "fov_radius": _fmt_float(s.params.fov_radius),
        "max_ticks": str(s.max_ticks),
        "seed": str(s.seed),
        "target_rule": s.params.target_rule.value,
    }
    out = [f"{k} = {header[k]}" for k in sorted(header)]
    out.append(SEPARATOR)
    for y, row in enumerate(s.world.kinds):
        chars = []
        for x, kind in enumerate(row):
            if s.spawn_region is not None and (x, y) in s.spawn_region and kind is CellKind.FREE:
                chars.append(SPAWN)
            else:
                chars.append(kind.value)
        out.append("".join(chars))
    return "\n".join(out) + "\n"


def make_corridor_scenario(corridor_width: int = 19, corridor_length: int = 30, exit_width: int = 3,
                           crowd_size: int = 400, seed: int = 0,
                           params: BehaviorParams | None = None, max_ticks: int = 10_000) -> Scenario:
    """Walled corridor with a centred exit in the top wall.

    The world is ``(corridor_width + 2) x (corridor_length + 2)`` including the
    wall ring. The spawn region covers the far half of the corridor, grown
    towards the door a row at a time when the crowd would not fit.
    """
    if exit_width % 2 == 0:
        raise ScenarioError("exit width must be odd")
    if exit_width > corridor_width:
        raise ScenarioError("exit exceeds corridor")
    if exit_width < 1 or corridor_width < 1:
        raise ScenarioError("widths must be positive")
    if corridor_length < 3:
        raise ScenarioError("corridor_length must be >= 3")

    w, h = corridor_width + 2, corridor_length + 2
    kinds = [[CellKind.WALL] * w for _ in range(h)]
    for y in range(1, h - 1):
        for x in range(1, w - 1):
            kinds[y][x] = CellKind.FREE
    mid = w // 2
    half = exit_width // 2
    for x in range(mid - half, mid + half + 1):
        kinds[0][x] = CellKind.EXIT

    rows = max(math.ceil(corridor_length / 2), math.ceil(crowd_size / corridor_width))
    rows = min(rows, corridor_length)
    region = Rect(1, corridor_length - rows + 1, corridor_width, corridor_length)
    world = GridWorld(w, h, kinds)
    return Scenario(world, world.exit_cells(), region, crowd_size, params or BehaviorParams(), seed, max_ticks)
