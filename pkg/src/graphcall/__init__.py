"""graphcall: a closed-loop LLM engine for natural-language graph problems.

The model never does graph math in its head: it builds and queries a session
graph through JSON-described function calls, and every result or structured
error flows back into the conversation until it can state a final answer.
"""

__version__ = "0.1.0"

from .graphs import ErrorKind, FlowPlan, Graph, GraphError, Matching, PathResult, init_graph

__all__ = [
    "ErrorKind",
    "FlowPlan",
    "Graph",
    "GraphError",
    "Matching",
    "PathResult",
    "init_graph",
    "__version__",
]
