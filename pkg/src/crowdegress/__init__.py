"""Deterministic grid microsimulation of crowd egress through a bottleneck,
with detectors for arching, double arching, clogging and bursty exit rates."""

from .core import Agent, BehaviorParams, CellKind, GridWorld, Rect, Scenario, ScenarioError, TargetRule
from .engine import SimState, run, spawn, tick
from .scenario_io import make_corridor_scenario, parse_scenario, serialize_scenario

__version__ = "0.1.0"
