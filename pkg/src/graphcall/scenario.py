"""Disaster-response world model: environment data, terrain map, and live
world events.

The engine treats hazard semantics as data: constraints are plain strings
handed to the model, which is responsible for compiling them into edge
weights (and for mirroring world changes into the session graph through the
graph tools).
"""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass, field
from pathlib import Path

HAZARDS = ("debris", "fire")
INJURY_LEVELS = ("low", "high")

EVENT_FIRE_EXPANDED = "fire_expanded"
EVENT_DEBRIS_CLEARED = "debris_cleared"
EVENT_SURVIVOR_RESCUED = "survivor_rescued"
EVENT_ROBOT_MOVED = "robot_moved"
EVENT_KINDS = (EVENT_FIRE_EXPANDED, EVENT_DEBRIS_CLEARED, EVENT_SURVIVOR_RESCUED, EVENT_ROBOT_MOVED)


class ScenarioError(Exception):
    """Bad scenario data or an event that does not apply to the world."""


@dataclass
class WorldEvent:
    kind: str
    location: str
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"kind": self.kind, "location": self.location, "details": self.details}

    def user_message(self) -> str:
        """The natural-language turn injected into the chat for this event."""
        if self.kind == EVENT_FIRE_EXPANDED:
            return f"Fire expanded to {self.location}. Update the environment."
        if self.kind == EVENT_DEBRIS_CLEARED:
            return f"Debris cleared at {self.location}. Update the environment."
        if self.kind == EVENT_SURVIVOR_RESCUED:
            return f"The survivor at {self.location} has been rescued. Update the environment."
        return f"A robot moved to {self.location}. Update the environment."


def _require(condition: bool, path: str, problem: str) -> None:
    if not condition:
        raise ScenarioError(f"scenario field '{path}': {problem}")


class World:
    """One scenario world per session, mutated only through apply_event."""

    def __init__(self, data: dict):
        _validate_scenario(data)
        self._initial = copy.deepcopy(data)
        self._data = copy.deepcopy(data)
        self.event_log: list[WorldEvent] = []

    # -- read-only tools ----------------------------------------------------

    def get_environment_data(self) -> dict:
        env = self._data["environment"]
        return {
            "entities": list(env["entities"]),
            "locations": list(env["locations"]),
            "relationships": [dict(r) for r in env["relationships"]],
            "constraints": list(env["constraints"]),
        }

    def get_environment_map_data(self) -> dict:
        m = self._data["map"]
        return {
            "terrain": [dict(t) for t in m["terrain"]],
            "description": list(m["description"]),
        }

    def terrain_distance(self, a: str, b: str) -> float | None:
        """Symmetric lookup; every terrain link is traversable both ways."""
        for t in self._data["map"]["terrain"]:
            if {t["location1"], t["location2"]} == {a, b}:
                return t["distance"]
        return None

    @property
    def locations(self) -> list[str]:
        return list(self._data["environment"]["locations"])

    # -- events --------------------------------------------------------------

    def apply_event(self, event: WorldEvent) -> str:
        summary = self._apply(self._data, event)
        self.event_log.append(event)
        return summary

    def _apply(self, data: dict, event: WorldEvent) -> str:
        env = data["environment"]
        if event.kind not in EVENT_KINDS:
            raise ScenarioError(f"unknown event kind '{event.kind}'; expected one of {', '.join(EVENT_KINDS)}")
        if event.location not in env["locations"]:
            raise ScenarioError(f"unknown location '{event.location}'")
        rels = env["relationships"]
        if event.kind == EVENT_FIRE_EXPANDED:
            for rel in rels:
                if rel["type"] == "obstacle" and rel["location"] == event.location:
                    rel["hazard"] = "fire"
                    break
            else:
                rels.append({"type": "obstacle", "location": event.location, "hazard": "fire"})
            return f"{event.location} is now a fire hazard"
        if event.kind == EVENT_DEBRIS_CLEARED:
            for rel in rels:
                if rel["type"] == "obstacle" and rel["location"] == event.location and rel["hazard"] == "debris":
                    rels.remove(rel)
                    return f"debris at {event.location} cleared"
            raise ScenarioError(f"no debris obstacle at '{event.location}'")
        if event.kind == EVENT_SURVIVOR_RESCUED:
            for rel in rels:
                if rel["type"] == "survivor" and rel["location"] == event.location:
                    rels.remove(rel)
                    return f"survivor at {event.location} rescued"
            raise ScenarioError(f"no survivor at '{event.location}'")
        source = event.details.get("from")
        if not source:
            raise ScenarioError("robot_moved events need details.from naming the robot's current location")
        for rel in rels:
            if rel["type"] == "robot" and rel["location"] == source:
                rel["location"] = event.location
                return f"robot moved from {source} to {event.location}"
        raise ScenarioError(f"no robot at '{source}'")

    def rebuild(self) -> "World":
        """Replay the event log onto the initial state (event-sourcing check)."""
        fresh = World(self._initial)
        for event in self.event_log:
            fresh.apply_event(event)
        return fresh

    def to_dict(self) -> dict:
        return copy.deepcopy(self._data)

    def __eq__(self, other) -> bool:
        if not isinstance(other, World):
            return NotImplemented
        return self._data == other._data


# -- scenario files -----------------------------------------------------------


def _validate_scenario(data: dict) -> None:
    _require(isinstance(data, dict), "$", "must be an object")
    for section in ("environment", "map"):
        _require(section in data, section, "is missing")
    env = data["environment"]
    for key in ("entities", "locations", "relationships", "constraints"):
        _require(key in env, f"environment.{key}", "is missing")
        _require(isinstance(env[key], list), f"environment.{key}", "must be a list")
    locations = set(env["locations"])
    for i, rel in enumerate(env["relationships"]):
        path = f"environment.relationships[{i}]"
        _require(isinstance(rel, dict), path, "must be an object")
        _require("type" in rel and "location" in rel, path, "needs 'type' and 'location'")
        _require(rel["location"] in locations, f"{path}.location", f"unknown location '{rel['location']}'")
        if rel["type"] == "obstacle":
            _require(rel.get("hazard") in HAZARDS, f"{path}.hazard", f"must be one of {HAZARDS}")
        elif rel["type"] == "survivor":
            _require(rel.get("injury_level") in INJURY_LEVELS, f"{path}.injury_level",
                     f"must be one of {INJURY_LEVELS}")
        elif rel["type"] == "robot":
            _require(isinstance(rel.get("status"), str), f"{path}.status", "must be a string")
        else:
            _require(False, f"{path}.type", f"unknown relationship type '{rel['type']}'")
    m = data["map"]
    for key in ("terrain", "description"):
        _require(key in m, f"map.{key}", "is missing")
        _require(isinstance(m[key], list), f"map.{key}", "must be a list")
    for i, t in enumerate(m["terrain"]):
        path = f"map.terrain[{i}]"
        _require(isinstance(t, dict), path, "must be an object")
        for k in ("location1", "location2", "distance"):
            _require(k in t, f"{path}.{k}", "is missing")
        for k in ("location1", "location2"):
            _require(t[k] in locations, f"{path}.{k}", f"unknown location '{t[k]}'")
        _require(isinstance(t["distance"], (int, float)) and t["distance"] > 0,
                 f"{path}.distance", "must be a positive number")


def load_scenario(path: str | Path) -> World:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"scenario file is not valid JSON: {exc}") from exc
    return World(data)


def save_scenario(world: World, path: str | Path) -> None:
    Path(path).write_text(json.dumps(world.to_dict(), indent=2) + "\n", encoding="utf-8")


# The default world every disaster session starts from: a nine-location urban
# grid with two rescue robots, three survivors, and debris/fire obstacles.
DEFAULT_SCENARIO: dict = {
    "environment": {
        "entities": ["rescue robots", "collapsed building", "survivors", "fire hazards"],
        "locations": ["L1", "L2", "L3", "L4", "L5", "L6", "L7", "L8", "L9"],
        "relationships": [
            {"type": "obstacle", "location": "L4", "hazard": "debris"},
            {"type": "obstacle", "location": "L8", "hazard": "fire"},
            {"type": "obstacle", "location": "L9", "hazard": "fire"},
            {"type": "obstacle", "location": "L2", "hazard": "debris"},
            {"type": "survivor", "location": "L3", "injury_level": "high"},
            {"type": "survivor", "location": "L7", "injury_level": "low"},
            {"type": "survivor", "location": "L1", "injury_level": "high"},
            {"type": "robot", "location": "L5", "status": "available"},
            {"type": "robot", "location": "L6", "status": "available"},
        ],
        "constraints": [
            "Passing through debris takes 3 times longer",
            "Can't go through fire",
        ],
    },
    "map": {
        "terrain": [
            {"location1": "L8", "location2": "L3", "distance": 5},
            {"location1": "L3", "location2": "L5", "distance": 3},
            {"location1": "L5", "location2": "L2", "distance": 2},
            {"location1": "L2", "location2": "L9", "distance": 4},
            {"location1": "L2", "location2": "L1", "distance": 4},
            {"location1": "L1", "location2": "L6", "distance": 5},
            {"location1": "L6", "location2": "L4", "distance": 3},
            {"location1": "L4", "location2": "L7", "distance": 4},
            {"location1": "L5", "location2": "L9", "distance": 3},
        ],
        "description": ["each terrain can be traversed in both directions"],
    },
}


def default_world() -> World:
    return World(DEFAULT_SCENARIO)
