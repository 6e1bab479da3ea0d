"""Built-in scripted sessions: deterministic assistant policies that replay
the engine's reference conversations offline.

Each policy pairs with the user prompts below; running them through the
orchestrator reproduces the same transcripts on every run, which is what the
golden-replay tests pin down.
"""

from __future__ import annotations

from .gateway import ScriptedPolicy, ScriptStep, ScriptedGateway

SOCIAL_NETWORK_PROMPT = (
    "Consider a bunch of friends. Tom is a friend of Katy and Paul, Paul is a friend of "
    "Steve, and Steve is a friend of Lily. Only friends can pass messages to each other. "
    "How many message passing would it take if Tom wants to send a message to Lily? "
    "Think step by step. What should be the procedure to do that?"
)

DISCONNECTED_PROMPT = (
    "In a graph with 7 nodes and following edges: [1, 3], [2, 3], [4, 5], find the "
    "distance between node 1 and node 4. Think step by step. What should be the "
    "procedure to do that?"
)

MATCHING_PROMPT = (
    "Three applicants 0, 1 and 2 all know each other. Applicant 0 likes job A, applicant "
    "1 likes job B. Find the maximum number of applicants that can be matched to a job."
)

DISASTER_DEPLOY_PROMPT = (
    "Deploy rescue robots. There are survivors and fire hazards around collapsed buildings."
)
DISASTER_VICTIMS_PROMPT = "What are the locations of victims with critical health condition?"
DISASTER_PRIORITIZE_PROMPT = "Prioritize saving victims in critical condition first."
DISASTER_FIRE_PROMPT = "Fire expanded to L2. Update the environment."


def social_network_policy() -> ScriptedPolicy:
    return ScriptedPolicy(steps=[
        ScriptStep(
            text=(
                "To determine how many message passings it would take for Tom to send a "
                "message to Lily, we need to find the shortest path between Tom and Lily "
                "in the friend network described. Here is the step-by-step procedure: "
                "create a graph of the friend network, add nodes for Tom, Katy, Paul, "
                "Steve, and Lily, add edges for the friendships, and find the shortest "
                "path between Tom and Lily."
            ),
            calls=[("GraphLibrary_init", {"directed": True, "weighted": False})],
        ),
        ScriptStep(calls=[("add_nodes", {"nodes": [0, 1, 2, 3, 4]})]),
        ScriptStep(calls=[("add_edges", {"edges": [[0, 1], [0, 2], [1, 3], [3, 4]]})]),
        ScriptStep(calls=[("find_shortest_path", {"start": 0, "end": 4})]),
        ScriptStep(
            text=(
                "The shortest path between Tom (node 0) and Lily (node 4) is: "
                "Tom -> Katy -> Steve -> Lily. Therefore, it would take 3 message "
                "passings for Tom to send a message to Lily through Katy and Steve. "
                "The problem is solved."
            ),
            expect_in_last_tool_result="[0, 1, 3, 4]",
        ),
    ])


def disconnected_graph_policy() -> ScriptedPolicy:
    return ScriptedPolicy(steps=[
        ScriptStep(
            text=(
                "To find the distance between node 1 and node 4, we can initialize a "
                "graph instance, add the 7 nodes, add the edges [1, 3], [2, 3] and "
                "[4, 5], and then find the shortest path between node 1 and node 4."
            ),
            calls=[("GraphLibrary_init", {})],
        ),
        ScriptStep(calls=[("add_nodes", {"nodes": [1, 2, 3, 4, 5, 6, 7]})]),
        ScriptStep(calls=[("add_edges", {"edges": [[1, 3], [2, 3], [4, 5]]})]),
        ScriptStep(calls=[("find_shortest_path", {"start": 1, "end": 4})]),
        ScriptStep(
            text=(
                "I apologize, but there is no path between node 1 and node 4 according "
                "to the given edges. Therefore, the distance between node 1 and node 4 "
                "is undefined."
            ),
            expect_in_last_tool_result="no path exists",
        ),
    ])


def bipartite_retry_policy() -> ScriptedPolicy:
    """Self-correction: a non-bipartite first attempt, repaired after the error."""
    return ScriptedPolicy(steps=[
        ScriptStep(
            text=(
                "We can model applicants and jobs as a graph and ask for a maximum "
                "matching. Let me build the graph of who knows whom first."
            ),
            calls=[("GraphLibrary_init", {"directed": False, "weighted": False})],
        ),
        ScriptStep(calls=[("add_edges", {"edges": [[0, 1], [1, 2], [0, 2]]})]),
        ScriptStep(calls=[("max_bipartite_matching", {})]),
        ScriptStep(
            text=(
                "The matching function reports that this graph is not bipartite: the "
                "acquaintance edges form an odd cycle. A matching problem needs edges "
                "between applicants and jobs only, so let me rebuild the graph with "
                "applicants 0 and 1 on one side and jobs 3 (A) and 4 (B) on the other."
            ),
            calls=[("GraphLibrary_init", {"directed": False, "weighted": False})],
            expect_in_last_tool_result="not bipartite",
        ),
        ScriptStep(calls=[("add_edges", {"edges": [[0, 3], [1, 4]]})]),
        ScriptStep(calls=[("max_bipartite_matching", {})]),
        ScriptStep(
            text=(
                "With applicants on one side and jobs on the other, the maximum matching "
                "pairs applicant 0 with job A and applicant 1 with job B. ANSWER: 2"
            ),
            expect_in_last_tool_result='"size": 2',
        ),
    ])


def disaster_demo_policy() -> ScriptedPolicy:
    """The decision-support session: deploy, query, prioritize, and replan
    after a fire event removes a location."""
    return ScriptedPolicy(steps=[
        # -- turn 1: "Deploy rescue robots..."
        ScriptStep(
            text=(
                "To deploy rescue robots, we need to understand the environment first. "
                "We can represent the environment as a graph where nodes represent "
                "locations and edges represent paths between these locations. Let's "
                "start by retrieving the environmental data."
            ),
            calls=[("get_environment_data", {})],
        ),
        ScriptStep(calls=[("get_environment_map_data", {})]),
        ScriptStep(
            text=(
                "Now that we have both the environmental and terrain data, we can create "
                "a graph to represent the environment. The graph will be weighted (to "
                "represent distances or difficulty of paths) and undirected (since each "
                "terrain can be traversed in both directions). Let's initiate a graph "
                "instance."
            ),
            calls=[("GraphLibrary_init", {"weighted": True, "directed": False})],
        ),
        ScriptStep(
            text=(
                "The graph instance has been initiated. Now, let's add the locations as "
                "nodes to the graph. The locations are L1, L2, L3, L4, L5, L6, L7, L8, "
                "and L9."
            ),
            calls=[("add_nodes", {"nodes": [0, 1, 2, 3, 4, 5, 6, 7, 8, 9]})],
        ),
        ScriptStep(
            text=(
                "We need to consider the constraints from the environmental data. "
                "Passing through debris takes 3 times longer and we can't go through "
                "fire. The locations with debris are L4 and L2, and the locations with "
                "fire are L8 and L9. Let's add the edges to the graph with these "
                "considerations."
            ),
            calls=[("add_edges", {
                "edges": [[8, 3], [3, 5], [5, 2], [2, 9], [2, 1], [1, 6], [6, 4], [4, 7], [5, 9]],
                "weights": [15, 3, 6, 12, 12, 5, 9, 4, 9],
            })],
        ),
        ScriptStep(
            text=(
                "The edges have been added to the graph with their respective weights "
                "considering the environmental constraints. Now, let's find the shortest "
                "path from the rescue robot's location to each survivor's location. The "
                "rescue robots are located at L5 and L6, and the survivors are located "
                "at L3, L7, and L1. Let's start with the robot at L5."
            ),
            calls=[("find_shortest_path", {"start": 5, "end": 3})],
        ),
        ScriptStep(calls=[("find_shortest_path", {"start": 5, "end": 7})]),
        ScriptStep(calls=[("find_shortest_path", {"start": 5, "end": 1})]),
        ScriptStep(
            text=(
                "The shortest paths from the rescue robot at location L5 to the "
                "survivors have been found: to L3 via [L5, L3], to L7 via "
                "[L5, L2, L1, L6, L4, L7], and to L1 via [L5, L2, L1]. Now, let's find "
                "the shortest paths from the rescue robot at location L6 to the "
                "survivors."
            ),
            calls=[("find_shortest_path", {"start": 6, "end": 3})],
        ),
        ScriptStep(calls=[("find_shortest_path", {"start": 6, "end": 7})]),
        ScriptStep(calls=[("find_shortest_path", {"start": 6, "end": 1})]),
        ScriptStep(
            text=(
                "The shortest paths from the rescue robot at location L6 to the "
                "survivors have been found: to L3 via [L6, L1, L2, L5, L3], to L7 via "
                "[L6, L4, L7], and to L1 via [L6, L1]. Now, we can deploy the rescue "
                "robots along these calculated paths to rescue the survivors. The rescue "
                "robot at L5 should first go to L3, then to L1, and finally to L7. The "
                "rescue robot at L6 should first go to L1, then to L7, and finally to L3."
            ),
        ),
        # -- turn 2: "What are the locations of victims with critical health condition?"
        ScriptStep(
            text=(
                "From the environmental data, the survivors with a high injury level "
                "(which we can interpret as a critical health condition) are located at "
                "L3 and L1."
            ),
        ),
        # -- turn 3: "Prioritize saving victims in critical condition first."
        ScriptStep(
            text=(
                "Given the critical condition of the survivors at locations L3 and L1, "
                "we should prioritize rescuing them first. The rescue robot at L5 is "
                "closest to the survivor at L3, so it should go there first, then to L1, "
                "and lastly to L7. The rescue robot at L6 is closest to the survivor at "
                "L1, so it should go there first, then to L7, and lastly to L3. This way "
                "the survivors in critical condition are rescued first."
            ),
        ),
        # -- turn 4: "Fire expanded to L2. Update the environment."
        ScriptStep(calls=[("delete_node", {"node": 2})]),
        ScriptStep(
            text=(
                "The node representing location L2, where the fire has expanded, has "
                "been removed from the graph. Now, we need to find new paths for the "
                "rescue robots, avoiding the fire at location L2. Starting with the "
                "rescue robot at location L5."
            ),
            calls=[("find_shortest_path", {"start": 5, "end": 3})],
        ),
        ScriptStep(calls=[("find_shortest_path", {"start": 6, "end": 3})]),
        ScriptStep(calls=[("find_shortest_path", {"start": 6, "end": 1})],
                   expect_in_last_tool_result="no path exists"),
        ScriptStep(calls=[("find_shortest_path", {"start": 6, "end": 7})]),
        ScriptStep(
            text=(
                "The rescue robot at location L6 can reach the survivors at L1 and L7. "
                "There is no path to the survivor at L3 due to the fire at location L2. "
                "Given the critical condition of the survivors at locations L3 and L1, "
                "we should prioritize rescuing them first. The new rescue plan is: the "
                "rescue robot at L5 should go to L3, and the rescue robot at L6 should "
                "first go to L1 and then to L7. This way, the survivors in critical "
                "condition are rescued first, and all reachable survivors are reached."
            ),
        ),
    ])


def loop_forever_policy() -> ScriptedPolicy:
    """Never stops calling tools; exists to exercise the round limit."""
    return ScriptedPolicy(
        steps=[
            ScriptStep(calls=[("GraphLibrary_init", {})]),
            ScriptStep(calls=[("node_count", {})]),
        ],
        cycle=True,
    )


POLICY_REGISTRY = {
    "social-network": social_network_policy,
    "disconnected": disconnected_graph_policy,
    "bipartite-retry": bipartite_retry_policy,
    "disaster-demo": disaster_demo_policy,
    "loop-forever": loop_forever_policy,
}


def scripted_gateway(policy_name: str) -> ScriptedGateway:
    if policy_name not in POLICY_REGISTRY:
        raise KeyError(
            f"unknown policy '{policy_name}'; available: {', '.join(sorted(POLICY_REGISTRY))}"
        )
    return ScriptedGateway(POLICY_REGISTRY[policy_name]())


def write_fixture_files(directory) -> list:
    """Record the reference sessions as replayable JSONL transcripts."""
    from pathlib import Path

    from .gateway import record_transcript
    from .orchestrator import Session, SessionConfig

    directory = Path(directory)
    written = []

    def run(name: str, kind: str, prompts: list[str]):
        session = Session(SessionConfig(session_kind=kind), scripted_gateway(name))
        for prompt in prompts:
            session.send(prompt)
        written.append(record_transcript(session.transcript, directory / f"{name}.jsonl"))

    run("social-network", "graph", [SOCIAL_NETWORK_PROMPT])
    run("disconnected", "graph", [DISCONNECTED_PROMPT])
    run("bipartite-retry", "graph", [MATCHING_PROMPT])
    run("disaster-demo", "disaster", [
        DISASTER_DEPLOY_PROMPT,
        DISASTER_VICTIMS_PROMPT,
        DISASTER_PRIORITIZE_PROMPT,
        DISASTER_FIRE_PROMPT,
    ])
    return written


if __name__ == "__main__":
    import sys

    target = sys.argv[1] if len(sys.argv) > 1 else "fixtures"
    for path in write_fixture_files(target):
        print(path)
