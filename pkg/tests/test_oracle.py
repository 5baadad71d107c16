import itertools

import pytest
from hypothesis import given, settings, strategies as st

from conftest import grid_graph, xy_tasks
from lcbs.cbs import validate_plan
from lcbs.cost_model import CostModel, edge_cost
from lcbs.instances import random_instance
from lcbs.oracle import OracleBudgetExceeded, dominates, enumerate_joint_plans, joint_lex_astar, pareto_filter


def naive_costs(graph, model, tasks, horizon):
    """Costs of every valid joint plan with makespan <= horizon, no pruning at all."""
    n = len(tasks)
    out = set()

    def walks(v, t):
        yield (v,)
        if t < horizon:
            for u in graph.neighbors[v] + (v,):
                for rest in walks(u, t + 1):
                    yield (v,) + rest

    per_agent = [[w for w in walks(task.start, 0) if w[-1] == task.goal] for task in tasks]
    for combo in itertools.product(*per_agent):
        T = max(len(w) for w in combo)
        at = [lambda t, w=w: w[min(t, len(w) - 1)] for w in combo]
        ok = True
        for t in range(T):
            here = [f(t) for f in at]
            if len(set(here)) < n:
                ok = False
                break
            if t + 1 < T:
                nxt = [f(t + 1) for f in at]
                if any(here[i] == nxt[j] and here[j] == nxt[i] for i in range(n) for j in range(i + 1, n)):
                    ok = False
                    break
        if ok:
            total = [0] * model.d
            for w in combo:
                for u, v in zip(w, w[1:]):
                    total = [a + b for a, b in zip(total, edge_cost(model, graph, u, v))]
            out.add(tuple(total))
    return out


def test_dominates():
    assert dominates((1, 2), (1, 3))
    assert not dominates((1, 2), (1, 2))
    assert not dominates((1, 3), (2, 2))
    with pytest.raises(ValueError):
        dominates((1,), (1, 2))


def test_pareto_filter():
    assert pareto_filter([(3, 1), (1, 3), (2, 2), (2, 3), (1, 3)]) == [(1, 3), (2, 2), (3, 1)]


def test_single_agent_corridor():
    graph = grid_graph("..")
    res = enumerate_joint_plans(graph, CostModel(2, mode="duplicated"), xy_tasks(graph, ((0, 0), (1, 0))), 4)
    assert res.lex_min_cost == (1, 1)
    assert res.pareto_set_costs == [(1, 1)]


def test_head_on_corridor_infeasible():
    graph = grid_graph("...")
    tasks = xy_tasks(graph, ((0, 0), (2, 0)), ((2, 0), (0, 0)))
    res = enumerate_joint_plans(graph, CostModel(1), tasks, 8)
    assert not res.feasible and res.pareto_set_costs == []
    assert joint_lex_astar(graph, CostModel(1), tasks, 8) == (None, None)


def test_crossing_needs_a_detour():
    graph = grid_graph("...", "...")
    tasks = xy_tasks(graph, ((0, 0), (2, 0)), ((2, 0), (0, 0)))
    res = enumerate_joint_plans(graph, CostModel(1), tasks, 8)
    assert res.lex_min_cost == (6,)
    assert not validate_plan(res.lex_min_plan, graph, CostModel(1), tasks)


def test_budget():
    _, graph, tasks = random_instance(5, agents=3)
    with pytest.raises(OracleBudgetExceeded):
        enumerate_joint_plans(graph, CostModel(2), tasks, 16, budget=50)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 2))
def test_pareto_set_matches_naive_enumeration(seed, d):
    _, graph, tasks = random_instance(seed, size=3, obstacle_fraction=0.1, agents=2)
    model = CostModel(d, seed=seed, cost_range=(1, 4))
    horizon = 5
    res = enumerate_joint_plans(graph, model, tasks, horizon)
    naive = naive_costs(graph, model, tasks, horizon)
    assert [tuple(c) for c in res.pareto_set_costs] == pareto_filter(naive)
    assert (res.lex_min_cost is None) == (not naive)
    if naive:
        assert tuple(res.lex_min_cost) == min(naive)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 3), st.integers(2, 3))
def test_dfs_and_joint_astar_agree(seed, d, n):
    _, graph, tasks = random_instance(seed, size=5, agents=n)
    model = CostModel(d, seed=seed)
    res = enumerate_joint_plans(graph, model, tasks, 10)
    cost, plan = joint_lex_astar(graph, model, tasks, 10)
    assert res.lex_min_cost == cost
    if plan is not None:
        assert not validate_plan(plan, graph, model, tasks)
        assert not validate_plan(res.lex_min_plan, graph, model, tasks)
