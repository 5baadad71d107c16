import io

import pytest

from lcbs import bench
from lcbs.bench import CSV_HEADER, ExperimentConfig, affine_fit, load_config, run_scaling, run_success_rate
from lcbs.cost_model import CostMode, CostModel
from lcbs.instances import random_instance


def test_load_config():
    cfg = load_config(
        "maps = a.map b.map  # two maps\nagents = 2,4\nobjectives = 3\ntime-limit = 0\ncost_range = 2..5\n",
        jobs=2,
    )
    assert cfg.maps == ["a.map", "b.map"]
    assert cfg.agents == [2, 4] and cfg.objectives == [3]
    assert cfg.time_limit is None and not cfg.record_timing
    assert cfg.cost_range == (2, 5) and cfg.jobs == 2


def test_load_config_override_disables_limit():
    assert load_config("time_limit = 30").time_limit == 30.0
    assert load_config("time_limit = 30", time_limit=None).time_limit is None


@pytest.mark.parametrize("text", ["bogus = 1", "agents", "repetitions = 0", "cost_mode = fancy"])
def test_load_config_errors(text):
    with pytest.raises(ValueError):
        load_config(text)


def test_find_scenarios_numeric_order(tmp_path):
    (tmp_path / "m.map").write_text("")
    for k in (10, 2, 1):
        (tmp_path / f"m-even-{k}.scen").write_text("")
    (tmp_path / "other-1.scen").write_text("")
    names = [p.name for p in bench.find_scenarios(str(tmp_path / "m.map"))]
    assert names == ["m-even-1.scen", "m-even-2.scen", "m-even-10.scen"]


@pytest.fixture(scope="module")
def small_config(data_dir):
    return ExperimentConfig(
        maps=[str(data_dir / "empty-32-32.map")], scenarios=2, random_scenarios=1, agents=[2, 3],
        objectives=[1, 2], time_limit=None,
    )


def test_success_rate_records(small_config):
    records = list(run_success_rate(small_config))
    assert len(records) == 3 * 2 * 2
    assert [(r.scen, r.agents, r.objectives) for r in records[:4]] == [
        ("empty-32-32-seeded-1.scen", 2, 1), ("empty-32-32-seeded-1.scen", 2, 2),
        ("empty-32-32-seeded-1.scen", 3, 1), ("empty-32-32-seeded-1.scen", 3, 2),
    ]
    assert records[-1].scen == "random-1"
    assert all(r.status == "Solved" and r.wall_ms is None for r in records)
    rates = bench.success_rates(records)
    assert set(rates.values()) == {1.0}


def test_csv_and_parallel_match(small_config):
    serial = io.StringIO()
    bench.write_csv(run_success_rate(small_config), serial)
    lines = serial.getvalue().splitlines()
    assert lines[0] == ",".join(CSV_HEADER)
    assert len(lines) == 13
    parallel = io.StringIO()
    bench.write_csv(run_success_rate(ExperimentConfig(**{**small_config.__dict__, "jobs": 2})), parallel)
    assert parallel.getvalue() == serial.getvalue()


def test_affine_fit():
    slope, intercept, r2 = affine_fit([1, 2, 3, 4], [3, 5, 7, 9])
    assert slope == pytest.approx(2) and intercept == pytest.approx(1) and r2 == pytest.approx(1)


def test_scaling_heap_ops_constant():
    _, graph, tasks = random_instance(8, size=8, agents=3)
    rows = run_scaling(graph, tasks, [2, 3, 4], repetitions=2)
    assert len({r.mean_heap_ops for r in rows}) == 1
    assert all(r.heap_ops_constant for r in rows)


def test_scaling_requires_duplicated():
    _, graph, tasks = random_instance(8, agents=2)
    with pytest.raises(ValueError):
        run_scaling(graph, tasks, [2], 1, CostModel(mode=CostMode.UNIT_FIRST))
