"""Python access to the planner: JSON documents in, decoded dicts out."""

import json

from . import _core
from ._core import FormatError, RoutingFailure, ValidationError, softmax, softmin

__all__ = ["FormatError", "RoutingFailure", "ValidationError", "softmax", "softmin",
           "parse_mission", "route", "plan", "monitor", "replay"]


def _text(mission):
    return mission if isinstance(mission, str) else json.dumps(mission)


def parse_mission(mission):
    return json.loads(_core.parse_mission(_text(mission)))


def route(mission, node_limit=None, time_limit=None):
    return json.loads(_core.route(_text(mission), node_limit, time_limit))


def _decode(out):
    out["route"] = json.loads(out["route"])
    out["report"] = json.loads(out["report"])
    return out


def plan(mission, seed=None, beta=None, starts=None, node_limit=None, time_limit=None):
    return _decode(_core.plan(_text(mission), seed, beta, starts, node_limit, time_limit))


def monitor(mission, trajectory_csv, beta=None):
    return json.loads(_core.monitor(_text(mission), trajectory_csv, beta))


def replay(mission, events_csv=None, seed=None):
    out = _decode(_core.replay(_text(mission), events_csv, seed))
    if "replan" in out:
        out["replan"]["report"] = json.loads(out["replan"]["report"])
    return out
