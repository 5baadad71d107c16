import pytest
from hypothesis import given, strategies as st

from conftest import grid_graph
from lcbs.cost_model import CostMode, CostModel, edge_cost, parse_cost_range, transition_table

G3 = grid_graph("...", ".@.", "...")

models = st.builds(
    CostModel,
    d=st.integers(1, 6),
    seed=st.integers(0, 2**64 - 1),
    mode=st.sampled_from(list(CostMode)),
    cost_range=st.tuples(st.integers(1, 5), st.integers(0, 20)).map(lambda t: (t[0], t[0] + t[1])),
    unit_wait=st.booleans(),
)


@given(models)
def test_shape_symmetry_and_range(model):
    lo, hi = model.cost_range
    for u, v in G3.edges():
        c = edge_cost(model, G3, u, v)
        assert c == edge_cost(model, G3, v, u)
        assert c.d == model.d and c[0] == 1
        if model.d > 1 and model.mode is CostMode.UNIT_FIRST:
            assert all(lo <= x <= hi for x in c[1:])
    for v in range(G3.num_vertices):
        w = edge_cost(model, G3, v, v)
        assert w.d == model.d and min(w) >= 1


def test_deterministic_across_instances():
    a, b = CostModel(3, seed=7), CostModel(3, seed=7)
    assert [edge_cost(a, G3, u, v) for u, v in G3.edges()] == [edge_cost(b, G3, u, v) for u, v in G3.edges()]


def test_seed_changes_costs():
    a, b = CostModel(4, seed=1), CostModel(4, seed=2)
    assert [edge_cost(a, G3, u, v) for u, v in G3.edges()] != [edge_cost(b, G3, u, v) for u, v in G3.edges()]


def test_prefix_stable_across_d():
    # objective k draws do not depend on d
    small, big = CostModel(2, seed=5), CostModel(5, seed=5)
    for u, v in G3.edges():
        assert edge_cost(big, G3, u, v)[:2] == edge_cost(small, G3, u, v)


def test_duplicated_and_scalar():
    for u, v in G3.edges():
        assert edge_cost(CostModel(4, mode="duplicated"), G3, u, v) == (1, 1, 1, 1)
        assert edge_cost(CostModel(1, seed=99), G3, u, v) == (1,)


def test_unit_wait():
    model = CostModel(3, seed=3, unit_wait=True)
    assert all(edge_cost(model, G3, v, v) == (1, 1, 1) for v in range(G3.num_vertices))


def test_non_adjacent_rejected():
    with pytest.raises(ValueError):
        edge_cost(CostModel(2), G3, G3.vertex(0, 0), G3.vertex(2, 2))


@pytest.mark.parametrize("kwargs", [dict(d=0), dict(cost_range=(0, 3)), dict(cost_range=(5, 4)), dict(seed=-1)])
def test_model_validation(kwargs):
    with pytest.raises(ValueError):
        CostModel(**kwargs)


def test_parse_cost_range():
    assert parse_cost_range("1..10") == (1, 10)
    with pytest.raises(ValueError):
        parse_cost_range("1-10")


def test_transition_table_matches_edge_cost():
    model = CostModel(3, seed=11)
    table = transition_table(G3, model)
    assert transition_table(G3, model) is table
    for v, moves in enumerate(table.moves):
        assert [u for u, _ in moves] == list(G3.neighbors[v]) + [v]
        for u, c in moves:
            assert c == edge_cost(model, G3, v, u)
