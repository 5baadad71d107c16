import json
import subprocess
import sys

import pytest

import lcbs.cli as cli
from lcbs.cbs import SolveResult, lcbs_solve
from lcbs.cli import EXIT_BUDGET, EXIT_INFEASIBLE, EXIT_MISMATCH, EXIT_OK, EXIT_USAGE, main, verify_instance
from lcbs.cost_model import CostModel, edge_cost
from lcbs.instances import random_instance
from lcbs.lastar import Path
from lcbs.map_io import GridMap, render_map, render_scen

CROSS_MAP = "type octile\nheight 3\nwidth 3\nmap\n...\n.@.\n...\n"
CROSS_SCEN = "version 1\n" + "".join(
    f"0\tx.map\t3\t3\t{a}\t{b}\t{c}\t{d}\t4\n" for a, b, c, d in [(0, 0, 2, 2), (2, 2, 0, 0), (2, 0, 0, 2)]
)


@pytest.fixture
def cross(tmp_path):
    m, s = tmp_path / "x.map", tmp_path / "x.scen"
    m.write_text(CROSS_MAP)
    s.write_text(CROSS_SCEN)
    return str(m), str(s)


@pytest.fixture
def head_on(tmp_path):
    m, s = tmp_path / "c.map", tmp_path / "c.scen"
    m.write_text("type octile\nheight 1\nwidth 3\nmap\n...\n")
    s.write_text("version 1\n0\tc.map\t3\t1\t0\t0\t2\t0\t2\n0\tc.map\t3\t1\t2\t0\t0\t0\t2\n")
    return str(m), str(s)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_solve_text(capsys, cross):
    code, out, _ = run(capsys, "solve", "--map", cross[0], "--scen", cross[1], "-n", "3", "-d", "2",
                       "--time-limit", "0")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0] == "status Solved"
    assert lines[1] == "cost_model d=2,mode=unit-first,seed=0,range=1..10"
    assert lines[2].startswith("cost {")
    assert [ln.split()[1] for ln in lines[3:6]] == ["0", "1", "2"]
    assert "wall_ms" not in out


def test_solve_json_and_timing(capsys, cross):
    code, out, _ = run(capsys, "solve", "--map", cross[0], "--scen", cross[1], "-n", "2", "--json")
    doc = json.loads(out)
    assert code == EXIT_OK and doc["status"] == "Solved"
    assert doc["agents"][0][0] == [0, 0, 0]
    assert "wall_ms" in doc["stats"]


def test_solve_writes_file(capsys, cross, tmp_path):
    target = tmp_path / "plan.txt"
    code, out, _ = run(capsys, "solve", "--map", cross[0], "--scen", cross[1], "-n", "1", "-o", str(target))
    assert code == EXIT_OK and out == ""
    assert target.read_text().startswith("status Solved")


def test_infeasible_exit(capsys, head_on):
    code, out, _ = run(capsys, "solve", "--map", head_on[0], "--scen", head_on[1], "-n", "2", "--time-limit", "0")
    assert code == EXIT_INFEASIBLE and out.startswith("status Infeasible")


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["solve"],
        ["solve", "--map", "missing.map", "--scen", "missing.scen", "-n", "1"],
        ["frobnicate"],
        ["solve", "--bogus-flag"],
    ],
    ids=["nothing", "no-args", "unreadable", "unknown-command", "unknown-flag"],
)
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == EXIT_USAGE and err


def test_bad_inputs_are_usage_errors(capsys, cross, tmp_path):
    bad = tmp_path / "bad.map"
    bad.write_text("type octile\nheight 1\nwidth 1\nmap\n#\n")
    code, _, err = run(capsys, "solve", "--map", str(bad), "--scen", cross[1], "-n", "1")
    assert code == EXIT_USAGE and "unknown map character" in err
    code, _, err = run(capsys, "solve", "--map", cross[0], "--scen", cross[1], "-n", "9")
    assert code == EXIT_USAGE and "requested" in err
    code, _, _ = run(capsys, "solve", "--map", cross[0], "--scen", cross[1], "-n", "1", "--cost-range", "5..1")
    assert code == EXIT_USAGE


def test_verify_ok(capsys, cross):
    code, out, _ = run(capsys, "verify", "--map", cross[0], "--scen", cross[1], "-n", "3", "-d", "2")
    assert code == EXIT_OK
    assert out.startswith("LEX-OK PARETO-OK")


def test_verify_infeasible_agrees(capsys, head_on):
    code, out, _ = run(capsys, "verify", "--map", head_on[0], "--scen", head_on[1], "-n", "2", "--horizon", "6")
    assert code == EXIT_OK and "oracle=Infeasible" in out


def test_verify_budget(capsys, cross):
    code, _, err = run(capsys, "verify", "--map", cross[0], "--scen", cross[1], "-n", "3", "--budget", "10")
    assert code == EXIT_BUDGET and "budget" in err


def first_objective_only(graph, model, tasks, time_limit=None, *, horizon=None):
    """A broken solver: optimal for objective 0, blind to the rest."""
    res = lcbs_solve(graph, CostModel(1), tasks, time_limit, horizon=horizon)
    if not res.solved:
        return res
    plan = []
    for p in res.plan:
        vs = p.vertices
        cost = [0] * model.d
        for u, v in zip(vs, vs[1:]):
            cost = [a + b for a, b in zip(cost, edge_cost(model, graph, u, v))]
        plan.append(Path.from_vertices(vs, cost))
    total = [sum(c) for c in zip(*(p.cost for p in plan))]
    return SolveResult(res.status, plan, type(plan[0].cost)(total), res.stats)


def test_mutation_is_detected():
    caught = 0
    for seed in range(40):
        _, graph, tasks = random_instance(seed, size=5, agents=2)
        model = CostModel(2, seed=seed)
        lex_ok, _, _, _ = verify_instance(graph, model, tasks, 10, solver=first_objective_only)
        caught += not lex_ok
        assert verify_instance(graph, model, tasks, 10)[0]
    assert caught > 0


def test_verify_mismatch_exit(capsys, cross, monkeypatch):
    monkeypatch.setattr(cli, "verify_instance", lambda *a, **k: (False, True, *verify_instance(*a, **k)[2:]))
    code, out, _ = run(capsys, "verify", "--map", cross[0], "--scen", cross[1], "-n", "2", "-d", "2")
    assert code == EXIT_MISMATCH and out.startswith("LEX-MISMATCH")


def test_bench_csv(capsys, data_dir):
    code, out, _ = run(capsys, "bench", "--maps", str(data_dir / "empty-32-32.map"), "--scenarios", "1",
                       "--agents", "2", "--objectives", "2", "--time-limit", "0")
    lines = out.splitlines()
    assert code == EXIT_OK
    assert lines[0] == "map,scen,agents,objectives,seed,status,wall_ms,cost,hl_exp,ll_exp"
    assert len(lines) == 2 and ",Solved,," in lines[1]


def test_bench_config_file(capsys, data_dir, tmp_path):
    cfg = tmp_path / "exp.cfg"
    cfg.write_text(f"maps = {data_dir / 'empty-32-32.map'}\nscenarios = 1\nagents = 2\nobjectives = 1,3\n")
    code, out, _ = run(capsys, "bench", "--config", str(cfg), "--time-limit", "0")
    assert code == EXIT_OK and len(out.splitlines()) == 3
    cfg.write_text("nonsense = 1\n")
    assert run(capsys, "bench", "--config", str(cfg))[0] == EXIT_USAGE


def test_bench_unreadable_map(capsys):
    assert run(capsys, "bench", "--maps", "nope.map")[0] == EXIT_USAGE


def test_scale(capsys, tmp_path):
    _, graph, tasks = random_instance(8, size=8, agents=3)
    m, s = tmp_path / "r.map", tmp_path / "r.scen"
    cells = tuple((x, y) in graph.index for y in range(8) for x in range(8))
    m.write_text(render_map(GridMap(8, 8, cells)))
    s.write_text(render_scen("r.map", graph, tasks))
    code, out, err = run(capsys, "scale", "--map", str(m), "--scen", str(s), "-n", "3", "--d-values", "2,4",
                         "--repetitions", "2")
    assert code == EXIT_OK
    rows = [ln.split(",") for ln in out.splitlines()[1:]]
    assert rows[0][3] == rows[1][3]
    assert "heap_ops_identical=True" in err


def test_module_entry_point(cross):
    proc = subprocess.run([sys.executable, "-m", "lcbs", "solve", "--map", cross[0], "--scen", cross[1], "-n", "1"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("status Solved")


@pytest.mark.parametrize("command", ["solve", "verify", "bench", "scale"])
def test_help_lists_flags(capsys, command):
    code, out, _ = run(capsys, command, "--help")
    assert code == EXIT_OK
    parser_flags = {"solve": "--time-limit", "verify": "--budget", "bench": "--jobs", "scale": "--d-values"}
    assert parser_flags[command] in out and "--output" in out
