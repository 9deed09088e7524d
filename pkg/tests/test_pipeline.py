"""Registry, dependency resolution, and plan construction."""

import itertools
import random

import pytest

from quarry.errors import CycleDetected, CycleIntroduced, MissingDependency
from quarry.pipeline import DepGraph, ToolRegistry, ToolSpec, plan

import dag_utils
import fig_dag


def test_register_and_dependency():
    r = ToolRegistry()
    r.register_tool(ToolSpec(tool_id="a"))
    r.register_tool(ToolSpec(tool_id="b", depends_on=["a"]))
    assert r.tool_ids() == ["a", "b"]


def test_self_loop_rejected():
    r = ToolRegistry()
    with pytest.raises(CycleIntroduced):
        r.register_tool(ToolSpec(tool_id="c", depends_on=["c"]))


def test_two_step_cycle_rejected():
    r = ToolRegistry()
    r.register_tool(ToolSpec(tool_id="a"))
    r.register_tool(ToolSpec(tool_id="b", depends_on=["a"]))
    with pytest.raises(CycleIntroduced):
        # replacing a with a version that depends on b closes the loop
        r.register_tool(ToolSpec(tool_id="a", depends_on=["b"]))
    # the failed registration left the registry untouched
    assert r.require("a").depends_on == []


def test_dangling_dependency_deferred_to_plan_time():
    r = ToolRegistry()
    r.register_tool(ToolSpec(tool_id="a"))
    r.register_tool(ToolSpec(tool_id="b", depends_on=["a", "z"]))  # z absent: accepted
    with pytest.raises(MissingDependency):
        r.resolve({"b"})


def test_reregister_replaces_version():
    r = ToolRegistry()
    r.register_tool(ToolSpec(tool_id="a", version="1"))
    r.register_tool(ToolSpec(tool_id="a", version="2"))
    assert r.version_of("a") == "2"


# ------------------------------------------------------------------ resolve


def test_resolve_figure_graph():
    r = fig_dag.build_registry()
    g = r.resolve(fig_dag.REQUESTED)
    assert g.nodes == set("ABCDEFGHIJK")
    want_edges = {(d, t) for t, deps in fig_dag.DEPS.items() for d in deps}
    assert g.edges == want_edges


def test_resolve_satisfied_prunes_prerequisites():
    r = ToolRegistry()
    r.register_tool(ToolSpec(tool_id="A"))
    r.register_tool(ToolSpec(tool_id="B", depends_on=["A"]))
    r.register_tool(ToolSpec(tool_id="E", depends_on=["B"]))
    g = r.resolve({"E"}, satisfied={"B"})
    assert g.nodes == {"E", "B"}
    assert g.satisfied == {"B"}


def test_resolve_single_node():
    r = ToolRegistry()
    r.register_tool(ToolSpec(tool_id="A"))
    g = r.resolve({"A"})
    assert g.nodes == {"A"} and g.edges == set()


def test_resolve_unknown_requested():
    r = ToolRegistry()
    with pytest.raises(MissingDependency):
        r.resolve({"nope"})


# --------------------------------------------------------------------- plan


def _is_topological(chain, deps):
    pos = {t: i for i, t in enumerate(chain)}
    return all(pos[d] < pos[t] for t in chain for d in deps[t] if d in pos)


def test_plan_figure_two_parallel_chains():
    r = fig_dag.build_registry()
    g = r.resolve(fig_dag.REQUESTED)
    result = plan(g)
    assert len(result.chains) == 2
    assert set(result.chains[0]) == fig_dag.COMPONENT_1
    assert set(result.chains[1]) == fig_dag.COMPONENT_2
    for chain in result.chains:
        assert _is_topological(chain, fig_dag.DEPS)
    # under the lexicographic tie-break these are the orders produced,
    # one of the many valid topological sortings
    assert result.chains == [list("ABEGFCD"), list("HJIK")]


def test_plan_all_satisfied_is_empty():
    r = fig_dag.build_registry()
    g = r.resolve(fig_dag.REQUESTED, satisfied=set("ABCDEFGHIJK"))
    assert plan(g).chains == []


def test_plan_diamond_lexicographic():
    r = ToolRegistry()
    r.register_tool(ToolSpec(tool_id="A"))
    r.register_tool(ToolSpec(tool_id="B", depends_on=["A"]))
    r.register_tool(ToolSpec(tool_id="C", depends_on=["A"]))
    r.register_tool(ToolSpec(tool_id="D", depends_on=["B", "C"]))
    result = plan(r.resolve({"D"}))

    # oracle: enumerate every topological order by brute force
    deps = {"A": [], "B": ["A"], "C": ["A"], "D": ["B", "C"]}
    valid = [
        list(p)
        for p in itertools.permutations("ABCD")
        if _is_topological(list(p), deps)
    ]
    assert result.chains == [min(valid)]
    assert min(valid) == ["A", "B", "C", "D"]


def test_plan_satisfied_node_splits_component():
    # A -> B -> C with B cached: A is not pulled in at all and C runs alone
    r = ToolRegistry()
    r.register_tool(ToolSpec(tool_id="A"))
    r.register_tool(ToolSpec(tool_id="B", depends_on=["A"]))
    r.register_tool(ToolSpec(tool_id="C", depends_on=["B"]))
    g = r.resolve({"C"}, satisfied={"B"})
    assert plan(g).chains == [["C"]]


def test_plan_cycle_detected_defensively():
    g = DepGraph(nodes={"a", "b"}, edges={("a", "b"), ("b", "a")}, requested={"a"}, satisfied=set())
    with pytest.raises(CycleDetected):
        plan(g)


# --------------------------------------------------------- validate_registry


def test_validate_healthy_registry():
    assert fig_dag.build_registry().validate_registry() == []


def test_validate_reports_dangling():
    r = ToolRegistry()
    r.register_tool(ToolSpec(tool_id="a", depends_on=["ghost"]))
    diags = r.validate_registry()
    assert len(diags) == 1
    assert diags[0].kind == "MissingDependency"
    assert diags[0].tools == ["a", "ghost"]


def test_validate_reports_injected_cycle():
    r = ToolRegistry()
    # bypass register_tool to corrupt the registry the way a bad bootstrap file could
    r._tools["a"] = ToolSpec(tool_id="a", depends_on=["b"])
    r._tools["b"] = ToolSpec(tool_id="b", depends_on=["a"])
    diags = r.validate_registry()
    assert any(d.kind == "CycleDetected" and set(d.tools) >= {"a", "b"} for d in diags)


# ----------------------------------------------------------------- properties


def test_random_dags_satisfy_all_plan_invariants():
    rng = random.Random(1234)
    for _ in range(150):
        graph, result = dag_utils.random_case(rng)
        dag_utils.check_plan(graph, result)


def test_plans_are_deterministic():
    rng = random.Random(99)
    for _ in range(30):
        registry, ids = dag_utils.random_registry(rng)
        requested = set(rng.sample(ids, k=rng.randint(1, len(ids))))
        satisfied = {t for t in ids if rng.random() < 0.3}
        first = plan(registry.resolve(requested, satisfied)).to_json()
        second = plan(registry.resolve(requested, satisfied)).to_json()
        assert first == second
