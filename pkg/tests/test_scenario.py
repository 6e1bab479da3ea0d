from __future__ import annotations

import pytest

from graphcall import scenario
from graphcall.scenario import ScenarioError, World, WorldEvent, default_world, load_scenario, save_scenario

EXPECTED_ENV = {
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
}

EXPECTED_MAP = {
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
}


def test_default_fixture_values_exact():
    world = default_world()
    assert world.get_environment_data() == EXPECTED_ENV
    assert world.get_environment_map_data() == EXPECTED_MAP


def test_terrain_symmetric_lookup():
    world = default_world()
    assert world.terrain_distance("L3", "L8") == 5
    assert world.terrain_distance("L8", "L3") == 5
    assert world.terrain_distance("L1", "L9") is None


def test_fire_expanded_updates_hazard_only():
    world = default_world()
    world.apply_event(WorldEvent(kind="fire_expanded", location="L2"))
    env = world.get_environment_data()
    l2 = [r for r in env["relationships"] if r.get("location") == "L2" and r["type"] == "obstacle"]
    assert l2 == [{"type": "obstacle", "location": "L2", "hazard": "fire"}]
    assert world.get_environment_map_data() == EXPECTED_MAP  # terrain untouched


def test_fire_expanded_on_clear_location_adds_obstacle():
    world = default_world()
    world.apply_event(WorldEvent(kind="fire_expanded", location="L5"))
    env = world.get_environment_data()
    assert {"type": "obstacle", "location": "L5", "hazard": "fire"} in env["relationships"]


def test_survivor_rescued_and_debris_cleared():
    world = default_world()
    world.apply_event(WorldEvent(kind="survivor_rescued", location="L3"))
    env = world.get_environment_data()
    assert not any(r["type"] == "survivor" and r["location"] == "L3" for r in env["relationships"])
    world.apply_event(WorldEvent(kind="debris_cleared", location="L4"))
    env = world.get_environment_data()
    assert not any(r.get("hazard") == "debris" and r["location"] == "L4" for r in env["relationships"])
    with pytest.raises(ScenarioError):
        world.apply_event(WorldEvent(kind="debris_cleared", location="L4"))


def test_robot_moved_needs_source():
    world = default_world()
    with pytest.raises(ScenarioError):
        world.apply_event(WorldEvent(kind="robot_moved", location="L3"))
    world.apply_event(WorldEvent(kind="robot_moved", location="L3", details={"from": "L5"}))
    env = world.get_environment_data()
    assert any(r["type"] == "robot" and r["location"] == "L3" for r in env["relationships"])


def test_unknown_location_and_kind():
    world = default_world()
    with pytest.raises(ScenarioError) as err:
        world.apply_event(WorldEvent(kind="fire_expanded", location="L99"))
    assert "unknown location" in str(err.value)
    with pytest.raises(ScenarioError):
        world.apply_event(WorldEvent(kind="meteor", location="L1"))


def test_event_sourcing_replay():
    world = default_world()
    world.apply_event(WorldEvent(kind="fire_expanded", location="L2"))
    world.apply_event(WorldEvent(kind="survivor_rescued", location="L7"))
    world.apply_event(WorldEvent(kind="robot_moved", location="L1", details={"from": "L6"}))
    assert world.rebuild() == world


def test_scenario_file_round_trip(tmp_path):
    world = default_world()
    world.apply_event(WorldEvent(kind="fire_expanded", location="L2"))
    path = tmp_path / "scenario.json"
    save_scenario(world, path)
    loaded = load_scenario(path)
    assert loaded == world


def test_scenario_schema_errors_name_fields(tmp_path):
    import json

    bad = {"environment": {"entities": [], "relationships": [], "constraints": []},
           "map": {"terrain": [], "description": []}}
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(bad))
    with pytest.raises(ScenarioError) as err:
        load_scenario(path)
    assert "environment.locations" in str(err.value)

    bad2 = json.loads(json.dumps(scenario.DEFAULT_SCENARIO))
    bad2["environment"]["relationships"][0]["hazard"] = "locusts"
    path.write_text(json.dumps(bad2))
    with pytest.raises(ScenarioError) as err:
        load_scenario(path)
    assert "relationships[0].hazard" in str(err.value)


def test_empty_scenario_is_valid():
    world = World({"environment": {"entities": [], "locations": [], "relationships": [],
                                   "constraints": []},
                   "map": {"terrain": [], "description": []}})
    assert world.get_environment_data()["locations"] == []


def test_user_messages_for_events():
    assert WorldEvent(kind="fire_expanded", location="L2").user_message() == \
        "Fire expanded to L2. Update the environment."
    assert "Debris cleared" in WorldEvent(kind="debris_cleared", location="L4").user_message()
