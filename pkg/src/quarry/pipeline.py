"""Tool registry and dependency-aware execution planning.

Tools declare prerequisite tools; the prerequisites of a request form a
directed acyclic graph. Planning prunes tools whose outputs are already
cached, splits the remaining graph into connected components, and orders
each component topologically. Components share no nodes, so they can run
in parallel; within a component the chain runs in order.

Determinism: topological ties are broken by picking the lexicographically
smallest admissible tool id, and components are sorted by their smallest
contained id, so identical inputs always produce identical plans.
"""

from __future__ import annotations

import heapq
import json
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .errors import CycleDetected, CycleIntroduced, MissingDependency

EXEC_CLASSES = ("native", "external")


@dataclass
class ToolSpec:
    """A registered processing step producing one analysis record per document."""

    tool_id: str
    version: str = "1"
    depends_on: list[str] = field(default_factory=list)
    exec_class: str = "native"
    output_projections: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "tool_id": self.tool_id,
            "version": self.version,
            "depends_on": list(self.depends_on),
            "exec_class": self.exec_class,
            "output_projections": list(self.output_projections),
        }

    @classmethod
    def from_json(cls, data: dict) -> "ToolSpec":
        return cls(
            tool_id=data["tool_id"],
            version=str(data.get("version", "1")),
            depends_on=list(data.get("depends_on", [])),
            exec_class=data.get("exec_class", "native"),
            output_projections=list(data.get("output_projections", [])),
        )


@dataclass
class DepGraph:
    """Dependency closure of a request; edges run prerequisite -> dependent."""

    nodes: set[str]
    edges: set[tuple[str, str]]
    requested: set[str]
    satisfied: set[str]


@dataclass
class ExecutionPlan:
    """One ordered chain per connected component of unsatisfied tools."""

    chains: list[list[str]]

    def task_count(self) -> int:
        return sum(len(c) for c in self.chains)

    def all_tools(self) -> set[str]:
        return {t for chain in self.chains for t in chain}

    def to_json(self) -> str:
        return json.dumps({"chains": self.chains}, sort_keys=True)


@dataclass
class Diagnostic:
    kind: str  # "MissingDependency" | "CycleDetected"
    message: str
    tools: list[str]


class ToolRegistry:
    """Mutable tool registry; one current version per tool id."""

    def __init__(self) -> None:
        self._tools: dict[str, ToolSpec] = {}

    def register_tool(self, spec: ToolSpec) -> None:
        """Add or replace a tool. Rejects registrations that would create a
        dependency cycle; dangling dependencies are only reported at plan time."""
        if not spec.tool_id or any(ch.isspace() for ch in spec.tool_id):
            raise ValueError(f"bad tool id {spec.tool_id!r}")
        if spec.exec_class not in EXEC_CLASSES:
            raise ValueError(f"unknown exec_class {spec.exec_class!r}")
        if spec.tool_id in spec.depends_on:
            raise CycleIntroduced(f"tool {spec.tool_id!r} depends on itself")
        candidate = dict(self._tools)
        candidate[spec.tool_id] = spec
        cycle = _find_cycle(candidate)
        if cycle:
            raise CycleIntroduced(f"registering {spec.tool_id!r} creates cycle {' -> '.join(cycle)}")
        self._tools[spec.tool_id] = spec

    def get(self, tool_id: str) -> Optional[ToolSpec]:
        return self._tools.get(tool_id)

    def require(self, tool_id: str) -> ToolSpec:
        spec = self._tools.get(tool_id)
        if spec is None:
            raise MissingDependency(f"tool {tool_id!r} is not registered")
        return spec

    def tool_ids(self) -> list[str]:
        return sorted(self._tools)

    def specs(self) -> list[ToolSpec]:
        return [self._tools[t] for t in sorted(self._tools)]

    def version_of(self, tool_id: str) -> str:
        return self.require(tool_id).version

    def load_bootstrap(self, path: str) -> None:
        """Load a JSON list of tool specs, registering in dependency-tolerant order."""
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        for entry in data:
            self.register_tool(ToolSpec.from_json(entry))

    # ----------------------------------------------------------- planning

    def resolve(self, requested: Iterable[str], satisfied: Iterable[str] = ()) -> DepGraph:
        """Gather the requested tools plus all transitive prerequisites.

        Satisfied tools are kept as marked nodes but their own prerequisites
        are not pulled in: their output already exists.
        """
        requested = set(requested)
        satisfied = set(satisfied)
        if not requested:
            raise MissingDependency("nothing requested")
        for tool_id in sorted(requested):
            if tool_id not in self._tools:
                raise MissingDependency(f"requested tool {tool_id!r} is not registered")

        nodes: set[str] = set()
        edges: set[tuple[str, str]] = set()
        stack = sorted(requested)
        while stack:
            tool_id = stack.pop()
            if tool_id in nodes:
                continue
            nodes.add(tool_id)
            if tool_id in satisfied:
                continue  # cached output stands in for the whole subtree
            spec = self._tools.get(tool_id)
            if spec is None:
                raise MissingDependency(f"tool {tool_id!r} (dependency) is not registered")
            for dep in spec.depends_on:
                if dep not in self._tools:
                    raise MissingDependency(f"tool {tool_id!r} depends on unregistered {dep!r}")
                edges.add((dep, tool_id))
                if dep not in nodes:
                    stack.append(dep)
        graph = DepGraph(nodes=nodes, edges=edges, requested=requested, satisfied=satisfied & nodes)
        _check_acyclic(graph)
        return graph

    def validate_registry(self) -> list[Diagnostic]:
        """Report dangling dependencies and cycles without mutating state."""
        out: list[Diagnostic] = []
        for tool_id in sorted(self._tools):
            for dep in self._tools[tool_id].depends_on:
                if dep not in self._tools:
                    out.append(
                        Diagnostic(
                            kind="MissingDependency",
                            message=f"tool {tool_id!r} depends on unregistered {dep!r}",
                            tools=[tool_id, dep],
                        )
                    )
        cycle = _find_cycle(self._tools)
        if cycle:
            out.append(
                Diagnostic(
                    kind="CycleDetected",
                    message=f"dependency cycle: {' -> '.join(cycle)}",
                    tools=cycle,
                )
            )
        return out


def plan(graph: DepGraph) -> ExecutionPlan:
    """Order the unsatisfied closure into per-component chains.

    Connectivity is computed on the unsatisfied subgraph only, so cached
    nodes can split one component into several independently runnable
    chains.
    """
    unsatisfied = graph.nodes - graph.satisfied
    edges = [(u, v) for (u, v) in graph.edges if u in unsatisfied and v in unsatisfied]

    # connected components over the undirected view
    neighbors: dict[str, set[str]] = {n: set() for n in unsatisfied}
    for u, v in edges:
        neighbors[u].add(v)
        neighbors[v].add(u)
    seen: set[str] = set()
    components: list[set[str]] = []
    for node in sorted(unsatisfied):
        if node in seen:
            continue
        comp = {node}
        frontier = [node]
        while frontier:
            cur = frontier.pop()
            for nxt in neighbors[cur]:
                if nxt not in comp:
                    comp.add(nxt)
                    frontier.append(nxt)
        seen |= comp
        components.append(comp)

    chains = [_topo_chain(comp, edges) for comp in sorted(components, key=min)]
    return ExecutionPlan(chains=chains)


def _topo_chain(comp: set[str], edges: list[tuple[str, str]]) -> list[str]:
    indeg = {n: 0 for n in comp}
    succ: dict[str, list[str]] = {n: [] for n in comp}
    for u, v in edges:
        if u in comp and v in comp:
            indeg[v] += 1
            succ[u].append(v)
    ready = [n for n in comp if indeg[n] == 0]
    heapq.heapify(ready)
    order: list[str] = []
    while ready:
        cur = heapq.heappop(ready)
        order.append(cur)
        for nxt in succ[cur]:
            indeg[nxt] -= 1
            if indeg[nxt] == 0:
                heapq.heappush(ready, nxt)
    if len(order) != len(comp):
        stuck = sorted(n for n in comp if indeg[n] > 0)
        raise CycleDetected(f"cycle among tools: {', '.join(stuck)}")
    return order


def _check_acyclic(graph: DepGraph) -> None:
    indeg = {n: 0 for n in graph.nodes}
    succ: dict[str, list[str]] = {n: [] for n in graph.nodes}
    for u, v in graph.edges:
        indeg[v] += 1
        succ[u].append(v)
    ready = [n for n in graph.nodes if indeg[n] == 0]
    done = 0
    while ready:
        cur = ready.pop()
        done += 1
        for nxt in succ[cur]:
            indeg[nxt] -= 1
            if indeg[nxt] == 0:
                ready.append(nxt)
    if done != len(graph.nodes):
        stuck = sorted(n for n in graph.nodes if indeg[n] > 0)
        raise CycleDetected(f"cycle among tools: {', '.join(stuck)}")


def _find_cycle(tools: dict[str, ToolSpec]) -> list[str]:
    """First cycle found among registered edges, as a node list; [] if none."""
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {t: WHITE for t in tools}
    parent: dict[str, str] = {}

    for root in sorted(tools):
        if color[root] != WHITE:
            continue
        stack = [(root, iter(sorted(d for d in tools[root].depends_on if d in tools)))]
        color[root] = GRAY
        while stack:
            node, it = stack[-1]
            advanced = False
            for dep in it:
                if color[dep] == WHITE:
                    color[dep] = GRAY
                    parent[dep] = node
                    stack.append((dep, iter(sorted(d for d in tools[dep].depends_on if d in tools))))
                    advanced = True
                    break
                if color[dep] == GRAY:
                    members = [node]
                    cur = node
                    while cur != dep and cur in parent:
                        cur = parent[cur]
                        members.append(cur)
                    if members[-1] != dep:
                        members.append(dep)
                    return list(reversed(members))
            if not advanced:
                color[node] = BLACK
                stack.pop()
    return []
