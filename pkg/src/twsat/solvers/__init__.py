"""Decision engines and splitting strategies."""
from __future__ import annotations

from dataclasses import dataclass

from ..decomp import TreeDecomposition
from ..formula import CnfFormula
from ..params import TradeoffParams
from .dp import dp_solve
from .hybrid import hybrid_solve
from .plan import PlanNode, SplitPlan, build_plan
from .recursive import recursive_solve
from .splitters import (SPLITTERS, make_hc, make_optimal, make_splitter, splitter_h2, splitter_half,
                        splitter_path)
from .stats import SolveResult, SolveStats, TypeViolation, Verdict

ENGINES = ("dp", "recursive", "hybrid")


@dataclass(frozen=True)
class SolverConfig:
    engine: str = "dp"
    params: TradeoffParams | None = None
    splitter: str = "hc"

    def __post_init__(self):
        if self.engine not in ENGINES:
            raise ValueError(f"unknown engine {self.engine!r}")
        if self.engine == "hybrid":
            if self.params is None:
                raise ValueError("hybrid engine needs (c, epsilon)")
            if self.splitter not in SPLITTERS:
                raise ValueError(f"unknown splitter {self.splitter!r}")
            if self.splitter == "h2" and self.params.c != 2:
                raise ValueError("splitter h2 requires c = 2")


def solve(formula: CnfFormula, decomp: TreeDecomposition, config: SolverConfig) -> SolveResult:
    if config.engine == "hybrid" and config.splitter == "path" and not decomp.is_path:
        raise ValueError("splitter path needs a path decomposition")
    if config.engine == "dp":
        return dp_solve(formula, decomp)
    if config.engine == "recursive":
        return recursive_solve(formula, decomp)
    return hybrid_solve(formula, decomp, config.params, config.splitter)


__all__ = [
    "ENGINES", "SPLITTERS", "PlanNode", "SolveResult", "SolveStats", "SolverConfig", "SplitPlan",
    "TypeViolation", "Verdict", "build_plan", "dp_solve", "hybrid_solve", "make_hc", "make_optimal",
    "make_splitter", "recursive_solve", "solve", "splitter_h2", "splitter_half", "splitter_path",
]
