"""The eleven-tool example DAG used across scheduler tests.

Two components; the request is {E, D, H, I, K} and the remaining nodes
exist only to feed them:

    A -> B -> E          H -> J -> I -> K
         B -> G -> F -> C -> D
"""

from quarry.pipeline import ToolRegistry, ToolSpec

DEPS = {
    "A": [],
    "B": ["A"],
    "C": ["F"],
    "D": ["C"],
    "E": ["B"],
    "F": ["G"],
    "G": ["B"],
    "H": [],
    "I": ["J"],
    "J": ["H"],
    "K": ["I"],
}

REQUESTED = {"E", "D", "H", "I", "K"}

COMPONENT_1 = {"A", "B", "C", "D", "E", "F", "G"}
COMPONENT_2 = {"H", "I", "J", "K"}


def build_registry() -> ToolRegistry:
    registry = ToolRegistry()
    for tool_id in sorted(DEPS):
        registry.register_tool(ToolSpec(tool_id=tool_id, depends_on=DEPS[tool_id]))
    return registry
