"""Command-line entry point: ``lcbs solve|verify|bench|scale``.

Exit codes: 0 success, 1 usage or I/O error, 2 timeout, 3 infeasible,
4 oracle budget exceeded. ``verify`` also exits 5 on a lex or Pareto mismatch.
"""

from __future__ import annotations

import argparse
import io
import json
import logging
import sys
from pathlib import Path as FsPath
from typing import Optional, Sequence

from . import bench
from .cbs import Status, lcbs_solve, validate_plan
from .cost_model import CostMode, CostModel, parse_cost_range
from .lexcore import format_cost
from .map_io import build_graph, parse_map, parse_scen
from .oracle import DEFAULT_BUDGET, OracleBudgetExceeded, dominates, enumerate_joint_plans

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_TIMEOUT = 2
EXIT_INFEASIBLE = 3
EXIT_BUDGET = 4
EXIT_MISMATCH = 5

log = logging.getLogger("lcbs")


_UNSET = object()


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _cost_range(text: str) -> tuple[int, int]:
    try:
        lo, hi = parse_cost_range(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if lo < 1 or hi < lo:
        raise argparse.ArgumentTypeError("cost range must satisfy 1 <= LO <= HI")
    return lo, hi


def _time_limit(text: str) -> Optional[float]:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError("time limit must be >= 0")
    return value or None


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def _int_list(text: str) -> list[int]:
    try:
        return [int(p) for p in text.split(",") if p]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _add_cost_flags(p: argparse.ArgumentParser, default_mode: str = "unit-first") -> None:
    p.add_argument("--objectives", "-d", type=_positive, default=2, help="number of objectives d")
    p.add_argument("--cost-seed", type=int, default=0, help="seed for the randomized objectives")
    p.add_argument("--cost-mode", choices=[m.value for m in CostMode], default=default_mode)
    p.add_argument("--cost-range", type=_cost_range, default=(1, 10), metavar="LO..HI")
    p.add_argument("--unit-wait", action="store_true", help="waits cost 1 in every objective")


def _add_instance_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--map", required=True, help="MovingAI .map file")
    p.add_argument("--scen", required=True, help="MovingAI .scen file")
    p.add_argument("--agents", "-n", type=_positive, required=True, help="use the first N tasks")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lcbs", description="Lexicographic conflict-based search for MO-MAPF.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="solve one instance")
    _add_instance_flags(p)
    _add_cost_flags(p)
    p.add_argument("--time-limit", type=_time_limit, default=120.0, help="seconds, 0 disables (default 120)")
    p.add_argument("--horizon", type=int, default=None, help="latest arrival time per agent")
    p.add_argument("--json", action="store_true", help="print a JSON plan document")
    p.add_argument("--timing", action=argparse.BooleanOptionalAction, default=None,
                   help="report wall time (default: only when a time limit is set)")
    p.add_argument("--output", "-o", help="write to this file instead of stdout")

    p = sub.add_parser("verify", help="check the solver against the brute-force oracle")
    _add_instance_flags(p)
    _add_cost_flags(p)
    p.add_argument("--horizon", type=int, default=16, help="oracle and solver horizon (default 16)")
    p.add_argument("--budget", type=_positive, default=DEFAULT_BUDGET, help="oracle partial-state budget")
    p.add_argument("--output", "-o")

    p = sub.add_parser("bench", help="success-rate experiment, CSV output")
    p.add_argument("--config", help="key=value config file; flags override it")
    p.add_argument("--maps", nargs="+", help="map files")
    p.add_argument("--scen-dir", help="directory with <map>-*.scen files (default: map directory)")
    p.add_argument("--scenarios", type=int, help="scenario files per map (default 25)")
    p.add_argument("--random-scenarios", type=int, help="extra seeded random scenarios per map")
    p.add_argument("--random-seed", type=int)
    p.add_argument("--agents", type=_int_list, help="agent counts, e.g. 2,4,6")
    p.add_argument("--objectives", type=_int_list, help="objective counts, e.g. 2,3")
    p.add_argument("--time-limit", type=_time_limit, default=_UNSET,
                   help="seconds per instance, 0 disables (default 120)")
    p.add_argument("--cost-seed", type=int)
    p.add_argument("--cost-mode", choices=[m.value for m in CostMode])
    p.add_argument("--cost-range", type=_cost_range, metavar="LO..HI")
    p.add_argument("--unit-wait", action="store_true", default=None)
    p.add_argument("--repetitions", type=_positive)
    p.add_argument("--jobs", type=_positive, help="worker processes")
    p.add_argument("--timing", action=argparse.BooleanOptionalAction, default=None,
                   help="record wall_ms (default: only when a time limit is set)")
    p.add_argument("--output", "-o", help="CSV path (default stdout)")

    p = sub.add_parser("scale", help="runtime versus number of objectives (duplicated costs)")
    _add_instance_flags(p)
    p.add_argument("--d-values", type=_int_list, default=list(range(2, 11)), help="default 2,...,10")
    p.add_argument("--repetitions", type=_positive, default=20)
    p.add_argument("--cost-mode", choices=[m.value for m in CostMode], default="duplicated")
    p.add_argument("--time-limit", type=_time_limit, default=None, help="seconds per solve, 0 disables")
    p.add_argument("--output", "-o", help="CSV path (default stdout)")
    return parser


def _read(path: str) -> bytes:
    try:
        return FsPath(path).read_bytes()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _load_instance(args):
    try:
        graph = build_graph(parse_map(_read(args.map)))
        scen = parse_scen(_read(args.scen), graph)
        tasks = scen.first(args.agents)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return graph, tasks


def _model(args) -> CostModel:
    return CostModel(args.objectives, args.cost_seed, CostMode(args.cost_mode), args.cost_range, args.unit_wait)


class _Out:
    """stdout or a file, opened lazily so failed runs leave nothing behind."""

    def __init__(self, path: Optional[str]):
        self.path = path
        self.lines: list[str] = []

    def print(self, text: str = "") -> None:
        self.lines.append(text)

    def flush(self) -> None:
        text = "\n".join(self.lines) + ("\n" if self.lines else "")
        if self.path is None:
            sys.stdout.write(text)
        else:
            try:
                FsPath(self.path).write_text(text)
            except OSError as exc:
                raise UsageError(f"cannot write {self.path}: {exc.strerror}") from None


def cmd_solve(args) -> int:
    graph, tasks = _load_instance(args)
    model = _model(args)
    try:
        result = lcbs_solve(graph, model, tasks, args.time_limit, horizon=args.horizon)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    timing = args.time_limit is not None if args.timing is None else args.timing
    stats = result.stats
    stat_fields = {
        "hl_expansions": stats.hl_expansions,
        "ll_expansions": stats.ll_expansions,
        "ll_generations": stats.low_level.generations,
        "heap_ops": stats.heap_ops,
    }
    if timing:
        stat_fields["wall_ms"] = round(stats.wall_time * 1000.0, 3)
    out = _Out(args.output)
    if result.solved:
        violations = validate_plan(result.plan, graph, model, tasks)
        if violations:
            raise AssertionError(f"solver returned an invalid plan: {violations}")
    if args.json:
        doc = {
            "status": result.status.value,
            "cost": list(result.cost) if result.cost is not None else None,
            "cost_model": model.describe(),
            "agents": [[[*graph.coords[s.vertex], s.time] for s in p.states] for p in result.plan or []],
            "stats": stat_fields,
        }
        out.print(json.dumps(doc, separators=(",", ":")))
    else:
        out.print(f"status {result.status.value}")
        out.print(f"cost_model {model.describe()}")
        if result.cost is not None:
            out.print(f"cost {format_cost(result.cost)}")
        for a, path in enumerate(result.plan or []):
            steps = " ".join(f"({graph.coords[s.vertex][0]},{graph.coords[s.vertex][1]},{s.time})" for s in path.states)
            out.print(f"agent {a} cost {format_cost(path.cost)} path {steps}")
        out.print("stats " + " ".join(f"{k}={v}" for k, v in stat_fields.items()))
    out.flush()
    return {Status.SOLVED: EXIT_OK, Status.TIMEOUT: EXIT_TIMEOUT, Status.INFEASIBLE: EXIT_INFEASIBLE}[result.status]


def verify_instance(graph, model, tasks, horizon, budget=DEFAULT_BUDGET, solver=lcbs_solve):
    """Run solver and oracle with the same horizon; return ``(lex_ok, pareto_ok, result, oracle)``."""
    oracle = enumerate_joint_plans(graph, model, tasks, horizon, budget)
    result = solver(graph, model, tasks, None, horizon=horizon)
    if not oracle.feasible:
        ok = result.status is Status.INFEASIBLE
        return ok, ok, result, oracle
    if not result.solved:
        return False, False, result, oracle
    lex_ok = tuple(result.cost) == tuple(oracle.lex_min_cost) and not validate_plan(result.plan, graph, model, tasks)
    pareto_ok = not any(dominates(p, result.cost) for p in oracle.pareto_set_costs)
    return lex_ok, pareto_ok, result, oracle


def cmd_verify(args) -> int:
    graph, tasks = _load_instance(args)
    model = _model(args)
    try:
        lex_ok, pareto_ok, result, oracle = verify_instance(graph, model, tasks, args.horizon, args.budget)
    except OracleBudgetExceeded as exc:
        print(f"lcbs verify: oracle budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    out = _Out(args.output)
    solver_cost = format_cost(result.cost) if result.cost is not None else result.status.value
    oracle_cost = format_cost(oracle.lex_min_cost) if oracle.feasible else "Infeasible"
    out.print(
        f"{'LEX-OK' if lex_ok else 'LEX-MISMATCH'} {'PARETO-OK' if pareto_ok else 'PARETO-VIOLATION'} "
        f"solver={solver_cost} oracle={oracle_cost} pareto_size={len(oracle.pareto_set_costs)} "
        f"plans={oracle.plans_enumerated}"
    )
    out.flush()
    return EXIT_OK if lex_ok and pareto_ok else EXIT_MISMATCH


def cmd_bench(args) -> int:
    overrides = {
        "maps": args.maps, "scen_dir": args.scen_dir, "scenarios": args.scenarios,
        "random_scenarios": args.random_scenarios, "random_seed": args.random_seed,
        "agents": args.agents, "objectives": args.objectives, "cost_seed": args.cost_seed,
        "cost_mode": args.cost_mode, "cost_range": args.cost_range, "unit_wait": args.unit_wait,
        "repetitions": args.repetitions, "jobs": args.jobs, "timing": args.timing,
    }
    text = _read(args.config).decode() if args.config else ""
    try:
        if args.time_limit is not _UNSET:
            overrides["time_limit"] = args.time_limit
        config = bench.load_config(text, **overrides)
    except ValueError as exc:
        raise UsageError(f"bad config: {exc}") from None
    if not config.maps:
        raise UsageError("no maps given (--maps or maps = ... in --config)")
    for path in config.maps:
        _read(path)
    records = list(bench.run_success_rate(config))
    out = _Out(args.output)
    buf = io.StringIO()
    bench.write_csv(records, buf)
    out.print(buf.getvalue().rstrip("\n"))
    out.flush()
    for (map_name, n, d), rate in sorted(bench.success_rates(records).items()):
        log.info("%s n=%d d=%d success=%.3f", map_name, n, d, rate)
    return EXIT_OK


def cmd_scale(args) -> int:
    graph, tasks = _load_instance(args)
    try:
        model = CostModel(mode=CostMode(args.cost_mode))
        rows = bench.run_scaling(graph, tasks, args.d_values, args.repetitions, model, args.time_limit)
    except (ValueError, RuntimeError) as exc:
        raise UsageError(str(exc)) from None
    out = _Out(args.output)
    out.print(bench.scaling_csv(rows).rstrip("\n"))
    out.flush()
    slope, intercept, r2 = bench.affine_fit([r.objectives for r in rows], [r.mean_wall_ms for r in rows])
    constant = len({r.mean_heap_ops for r in rows}) == 1 and all(r.heap_ops_constant for r in rows)
    print(
        f"fit wall_ms = {slope:.3f} * d + {intercept:.3f}  r2={r2:.4f}  "
        f"ratio={rows[-1].mean_wall_ms / rows[0].mean_wall_ms:.3f}  heap_ops_identical={constant}",
        file=sys.stderr,
    )
    return EXIT_OK


COMMANDS = {"solve": cmd_solve, "verify": cmd_verify, "bench": cmd_bench, "scale": cmd_scale}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"lcbs {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
