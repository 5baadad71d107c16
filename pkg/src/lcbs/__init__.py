"""Lexicographic conflict-based search for multi-objective multi-agent path finding."""

from .cbs import (
    Conflict,
    CTNode,
    SolveResult,
    SolveStats,
    Status,
    Violation,
    detect_first_conflict,
    generate_constraints,
    lcbs_solve,
    validate_plan,
)
from .constraints import Constraint, ConstraintSet, edge_constraint, vertex_constraint
from .cost_model import CostMode, CostModel, edge_cost
from .heuristics import HeuristicTable, build_heuristic
from .lastar import LowLevelStats, Path, TimedState, la_star
from .lexcore import CostVector, Ordering, format_cost, lex_cmp, parse_cost, vec_add, zero
from .map_io import AgentTask, GridMap, Scenario, SearchGraph, build_graph, parse_map, parse_scen
from .oracle import OracleResult, dominates, enumerate_joint_plans, joint_lex_astar

__version__ = "0.1.0"
