from .relax import (CUT_FAMILIES, CutLoopResult, LpResult, gap_pct, lp_gap, root_cut_loop,
                    solve_lp)
from .simplex import INFEASIBLE, OPTIMAL, UNBOUNDED, NumericalFailure, solve_bounded

__all__ = [
    "CUT_FAMILIES", "CutLoopResult", "LpResult", "gap_pct", "lp_gap", "root_cut_loop",
    "solve_lp", "INFEASIBLE", "OPTIMAL", "UNBOUNDED", "NumericalFailure", "solve_bounded",
]
