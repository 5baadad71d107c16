"""Success-rate and objective-scaling experiments.

Records stream out in a fixed order, ``(map, scenario, agents, objectives)``
nested in that order, whatever the number of worker processes.
"""

from __future__ import annotations

import csv
import dataclasses
import gc
import io
import logging
import random
import re
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path as FsPath
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from .cbs import Status, lcbs_solve, validate_plan
from .cost_model import CostMode, CostModel, parse_cost_range
from .instances import bfs_distances, random_tasks
from .lexcore import format_cost
from .map_io import AgentTask, Scenario, SearchGraph, build_graph, parse_map, parse_scen

__all__ = [
    "BenchRecord",
    "CSV_HEADER",
    "ExperimentConfig",
    "ScalingRow",
    "affine_fit",
    "find_scenarios",
    "load_config",
    "run_scaling",
    "run_success_rate",
    "success_rates",
    "write_csv",
]

log = logging.getLogger(__name__)

CSV_HEADER = ("map", "scen", "agents", "objectives", "seed", "status", "wall_ms", "cost", "hl_exp", "ll_exp")


@dataclass
class ExperimentConfig:
    maps: list[str] = field(default_factory=list)
    scen_dir: Optional[str] = None  # defaults to each map's directory
    scenarios: int = 25
    random_scenarios: int = 0
    random_seed: int = 0
    agents: list[int] = field(default_factory=lambda: [5])
    objectives: list[int] = field(default_factory=lambda: [2])
    time_limit: Optional[float] = 120.0  # seconds; None disables
    cost_seed: int = 0
    cost_mode: CostMode = CostMode.UNIT_FIRST
    cost_range: tuple[int, int] = (1, 10)
    unit_wait: bool = False
    repetitions: int = 1
    jobs: int = 1
    timing: Optional[bool] = None  # None: record wall time only when a limit is set

    def __post_init__(self):
        self.cost_mode = CostMode(self.cost_mode)
        if self.time_limit is not None and self.time_limit <= 0:
            raise ValueError("time limit must be positive (use None to disable)")
        if self.repetitions < 1 or self.jobs < 1:
            raise ValueError("repetitions and jobs must be at least 1")

    @property
    def record_timing(self) -> bool:
        return self.time_limit is not None if self.timing is None else self.timing

    def cost_model(self, d: int) -> CostModel:
        return CostModel(d, self.cost_seed, self.cost_mode, tuple(self.cost_range), self.unit_wait)


_LIST_KEYS = {"maps": str, "agents": int, "objectives": int}


def _parse_value(key: str, raw: str):
    raw = raw.strip()
    if key in _LIST_KEYS:
        conv = _LIST_KEYS[key]
        return [conv(p) for p in re.split(r"[,\s]+", raw) if p]
    if key in ("scen_dir",):
        return raw or None
    if key == "time_limit":
        return None if raw.lower() in ("", "0", "none", "off") else float(raw)
    if key == "cost_range":
        return parse_cost_range(raw)
    if key in ("unit_wait", "timing"):
        if raw.lower() in ("1", "true", "yes", "on"):
            return True
        if raw.lower() in ("0", "false", "no", "off"):
            return False
        raise ValueError(f"{key}: expected a boolean, got {raw!r}")
    if key == "cost_mode":
        return CostMode(raw)
    return int(raw)


def load_config(text: str, **overrides) -> ExperimentConfig:
    """Parse a flat ``key = value`` file; ``#`` starts a comment.

    Keys are :class:`ExperimentConfig` field names (dashes allowed). Keyword
    overrides win over the file.
    """
    names = {f.name for f in dataclasses.fields(ExperimentConfig)}
    values = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, raw = line.partition("=")
        key = key.strip().replace("-", "_")
        if not sep:
            raise ValueError(f"config line {lineno}: expected key = value")
        if key not in names:
            raise ValueError(f"config line {lineno}: unknown key {key!r}")
        values[key] = _parse_value(key, raw)
    values.update({k: v for k, v in overrides.items() if v is not None})
    if "time_limit" in overrides:  # explicit None disables the limit
        values["time_limit"] = overrides["time_limit"]
    return ExperimentConfig(**values)


@dataclass
class BenchRecord:
    map: str
    scen: str
    agents: int
    objectives: int
    seed: int
    status: str
    wall_ms: Optional[float]
    cost: Optional[str]
    hl_exp: int
    ll_exp: int

    def row(self) -> list[str]:
        wall = "" if self.wall_ms is None else f"{self.wall_ms:.3f}"
        return [
            self.map, self.scen, str(self.agents), str(self.objectives), str(self.seed),
            self.status, wall, self.cost or "", str(self.hl_exp), str(self.ll_exp),
        ]


def _scen_index(path: FsPath) -> tuple:
    m = re.search(r"(\d+)\.scen$", path.name)
    return (int(m.group(1)) if m else 0, path.name)


def find_scenarios(map_path: str, scen_dir: Optional[str] = None) -> list[FsPath]:
    """Scenario files named ``<map stem>-*.scen``, in numeric order."""
    mp = FsPath(map_path)
    directory = FsPath(scen_dir) if scen_dir else mp.parent
    return sorted(directory.glob(f"{mp.stem}-*.scen"), key=_scen_index)


def random_scenario(map_name: str, graph: SearchGraph, n: int, seed: int) -> Scenario:
    rng = random.Random(f"{map_name}:{seed}")
    return Scenario(map_name, tuple(random_tasks(graph, n, rng)))


@dataclass(frozen=True)
class _Job:
    map_name: str
    scen_name: str
    graph: SearchGraph
    tasks: tuple[AgentTask, ...]
    model: CostModel
    time_limit: Optional[float]
    timing: bool


def _run_job(job: _Job) -> BenchRecord:
    result = lcbs_solve(job.graph, job.model, job.tasks, job.time_limit)
    cost = None
    status = result.status
    if result.solved:
        violations = validate_plan(result.plan, job.graph, job.model, job.tasks)
        if violations:
            raise AssertionError(f"{job.map_name}/{job.scen_name}: invalid plan {violations[:3]}")
        cost = format_cost(result.cost)
    return BenchRecord(
        job.map_name, job.scen_name, len(job.tasks), job.model.d, job.model.seed, status.value,
        result.stats.wall_time * 1000.0 if job.timing else None,
        cost, result.stats.hl_expansions, result.stats.ll_expansions,
    )


def _jobs(config: ExperimentConfig) -> Iterator[_Job]:
    max_agents = max(config.agents)
    for map_path in config.maps:
        name = FsPath(map_path).name
        try:
            graph = build_graph(parse_map(FsPath(map_path).read_bytes()))
        except (OSError, ValueError) as exc:
            log.error("skipping map %s: %s", map_path, exc)
            continue
        scenarios: list[tuple[str, Scenario]] = []
        for scen_path in find_scenarios(map_path, config.scen_dir)[: config.scenarios]:
            try:
                scenarios.append((scen_path.name, parse_scen(scen_path.read_bytes(), graph)))
            except (OSError, ValueError) as exc:
                log.error("skipping scenario %s: %s", scen_path, exc)
        if len(scenarios) < config.scenarios:
            log.warning("%s: found %d of %d scenarios", name, len(scenarios), config.scenarios)
        for k in range(config.random_scenarios):
            scenarios.append((f"random-{k + 1}", random_scenario(name, graph, max_agents, config.random_seed + k)))
        for scen_name, scen in scenarios:
            for n in config.agents:
                if n > len(scen.tasks):
                    log.warning("%s: only %d tasks, skipping n=%d", scen_name, len(scen.tasks), n)
                    continue
                tasks = tuple(scen.first(n))
                for d in config.objectives:
                    for _ in range(config.repetitions):
                        yield _Job(name, scen_name, graph, tasks, config.cost_model(d),
                                   config.time_limit, config.record_timing)


def run_success_rate(config: ExperimentConfig) -> Iterator[BenchRecord]:
    """Solve every (map, scenario, agents, objectives) cell and yield records."""
    jobs = _jobs(config)
    if config.jobs == 1:
        for job in jobs:
            yield _run_job(job)
        return
    with ProcessPoolExecutor(max_workers=config.jobs) as pool:
        yield from pool.map(_run_job, jobs)


def success_rates(records: Iterable[BenchRecord]) -> dict[tuple[str, int, int], float]:
    """Solved fraction per ``(map, agents, objectives)``."""
    totals: dict[tuple[str, int, int], list[int]] = {}
    for r in records:
        cell = totals.setdefault((r.map, r.agents, r.objectives), [0, 0])
        cell[0] += r.status == Status.SOLVED.value
        cell[1] += 1
    return {k: solved / total for k, (solved, total) in totals.items()}


def write_csv(records: Iterable[BenchRecord], stream) -> int:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    count = 0
    for r in records:
        writer.writerow(r.row())
        count += 1
    return count


@dataclass
class ScalingRow:
    objectives: int
    repetitions: int
    mean_wall_ms: float
    mean_heap_ops: float
    heap_ops: tuple[int, ...]  # per repetition
    hl_exp: int
    ll_exp: int

    @property
    def heap_ops_constant(self) -> bool:
        return len(set(self.heap_ops)) == 1


SCALING_HEADER = ("objectives", "repetitions", "mean_wall_ms", "mean_heap_ops", "hl_exp", "ll_exp")


def run_scaling(
    graph: SearchGraph,
    tasks: Sequence[AgentTask],
    d_values: Sequence[int] = tuple(range(2, 11)),
    repetitions: int = 20,
    model: Optional[CostModel] = None,
    time_limit: Optional[float] = None,
) -> list[ScalingRow]:
    """Time the same instance for each objective count in duplicated mode.

    With every component equal the search visits the same states in the same
    order for every ``d``, so only the per-operation vector cost changes.
    Repetitions of different ``d`` are interleaved to spread drift evenly,
    and the cyclic collector is paused while timing, as ``timeit`` does, so
    collections triggered by unrelated live objects do not land on random runs.
    """
    base = model or CostModel(mode=CostMode.DUPLICATED)
    if base.mode is not CostMode.DUPLICATED:
        raise ValueError("scaling runs require duplicated cost mode")
    models = {d: dataclasses.replace(base, d=d) for d in d_values}
    walls: dict[int, list[float]] = {d: [] for d in d_values}
    ops: dict[int, list[int]] = {d: [] for d in d_values}
    exp: dict[int, tuple[int, int]] = {}
    for d in d_values:  # warm caches outside the timed region
        lcbs_solve(graph, models[d], tasks, time_limit)
    gc_was_enabled = gc.isenabled()
    gc.collect()
    gc.disable()  # search garbage is acyclic, reference counting frees it
    try:
        for _ in range(repetitions):
            for d in d_values:
                t0 = time.perf_counter()
                result = lcbs_solve(graph, models[d], tasks, time_limit)
                walls[d].append((time.perf_counter() - t0) * 1000.0)
                if result.status is not Status.SOLVED:
                    raise RuntimeError(f"scaling instance not solved at d={d}: {result.status.value}")
                ops[d].append(result.stats.heap_ops)
                exp[d] = (result.stats.hl_expansions, result.stats.ll_expansions)
    finally:
        if gc_was_enabled:
            gc.enable()
    return [
        ScalingRow(d, repetitions, float(np.mean(walls[d])), float(np.mean(ops[d])), tuple(ops[d]), *exp[d])
        for d in d_values
    ]


def affine_fit(x: Sequence[float], y: Sequence[float]) -> tuple[float, float, float]:
    """Least-squares ``y = slope * x + intercept``; returns ``(slope, intercept, r2)``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
    return float(slope), float(intercept), r2


def scaling_csv(rows: Sequence[ScalingRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SCALING_HEADER)
    for r in rows:
        writer.writerow([r.objectives, r.repetitions, f"{r.mean_wall_ms:.3f}", f"{r.mean_heap_ops:.1f}", r.hl_exp, r.ll_exp])
    return buf.getvalue()
