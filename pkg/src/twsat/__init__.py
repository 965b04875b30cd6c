"""Width-parameterized SAT: DP, polynomial-space recursion and time-space hybrids."""
from .decomp import TreeDecomposition, make_nice, parse_td, emit_td, validate
from .formula import CnfFormula, parse_dimacs, emit_dimacs
from .params import TradeoffParams, compute_schedule, depth_bound, plan_parameters
from .solvers import SolverConfig, Verdict, dp_solve, hybrid_solve, recursive_solve, solve

__version__ = "0.1.0"

__all__ = [
    "CnfFormula", "SolverConfig", "TradeoffParams", "TreeDecomposition", "Verdict",
    "compute_schedule", "depth_bound", "dp_solve", "emit_dimacs", "emit_td", "hybrid_solve",
    "make_nice", "parse_dimacs", "parse_td", "plan_parameters", "recursive_solve", "solve", "validate",
]
