"""LP relaxations of the MIP models, the root cutting-plane loop and the LP gap."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

from ..graph import Instance
from ..mip.model import LinearConstraint, MipModel, ModelOptions, build_model
from ..mip.separation import FractionalPoint, separate_clique, separate_extcost, separate_tdomy
from .simplex import OPTIMAL, solve_bounded

CUT_FAMILIES = ("TDOMY", "CLIQUE", "EXTCOSTS")
MAX_ROUNDS = 10


@dataclass
class LpResult:
    status: str
    objective: Optional[float]
    values: dict = field(default_factory=dict)
    point: Optional[FractionalPoint] = None
    iterations: int = 0
    duals: dict = field(default_factory=dict)
    dual_objective: Optional[float] = None
    primal_residual: float = 0.0
    cs_residual: float = 0.0

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


def solve_lp(model: MipModel, exact: bool = False,
             instance: Optional[Instance] = None) -> LpResult:
    """Solve the relaxation of ``model`` (integrality is ignored, bounds kept).

    With ``instance`` the result also carries the point in vertex/edge
    indexing for the separators.  Raises ``NumericalFailure`` when float
    arithmetic cannot be trusted; ``exact=True`` then gives rational values.
    """
    relaxed = model.relaxed()
    idx = relaxed.var_index
    nv = len(relaxed.variables)
    c = [v.obj for v in relaxed.variables]
    lower = [v.lower for v in relaxed.variables]
    upper = [v.upper for v in relaxed.variables]
    A = [[0] * nv for _ in relaxed.constraints]
    for r, con in enumerate(relaxed.constraints):
        row = A[r]
        for name, coef in con.terms:
            row[idx[name]] += coef
    senses = [con.sense for con in relaxed.constraints]
    rhs = [con.rhs for con in relaxed.constraints]
    res = solve_bounded(c, A, senses, rhs, lower, upper, exact=exact)
    if res.status != OPTIMAL:
        return LpResult(res.status, None, iterations=res.iterations)
    values = {v.name: res.x[k] for k, v in enumerate(relaxed.variables)}
    duals = {con.name: res.duals[r] for r, con in enumerate(relaxed.constraints)}
    point = FractionalPoint.from_values(instance, values) if instance is not None else None
    return LpResult(OPTIMAL, res.objective, values, point, res.iterations, duals,
                    res.dual_objective, res.primal_residual, res.cs_residual)


@dataclass
class CutLoopResult:
    result: LpResult
    added_cuts: list  # (round, LinearConstraint)
    bounds: list  # relaxation value after each solve, starting with the plain model
    rounds: int
    timed_out: bool = False

    @property
    def bound(self) -> float:
        return self.result.objective


def _separate(instance: Instance, model: MipModel, point: FractionalPoint,
              families: Iterable[str]) -> list[LinearConstraint]:
    cuts: list[LinearConstraint] = []
    fams = set(families)
    if "TDOMY" in fams:
        cuts += separate_tdomy(instance, point)
    if "CLIQUE" in fams:
        cuts += separate_clique(instance, point)
    if model.formulation == "F2":
        k = model.options.extcost_init_k
        cuts += separate_extcost(instance, point, k_skip=k if k is not None else 5,
                                 lifted=model.options.lifted)
    return cuts


def root_cut_loop(instance: Instance, formulation: str, cut_families: Iterable[str] = (),
                  max_rounds: int = MAX_ROUNDS, options: Optional[ModelOptions] = None,
                  time_limit: Optional[float] = None, exact: bool = False) -> CutLoopResult:
    """Solve, separate, add violated cuts, resolve; at most ``max_rounds`` separation rounds.

    For F2 the external-cost inequalities beyond the initial ``k`` are
    enumerated every round, so the loop reaches their closure exactly.
    """
    f = formulation.upper()
    fams = [s.upper() for s in cut_families]
    if f not in ("F1", "F2"):
        raise ValueError("cut loop supports F1 and F2")
    bad = [s for s in fams if s not in CUT_FAMILIES]
    if bad:
        raise ValueError(f"unknown cut families {bad}")
    if "EXTCOSTS" in fams and f != "F2":
        raise ValueError("EXTCOSTS cuts need F2")
    model = build_model(instance, f, options)
    t0 = time.perf_counter()
    res = solve_lp(model, exact=exact, instance=instance)
    bounds = [res.objective]
    added: list = []
    present = {c.name for c in model.constraints}
    rounds = 0
    timed_out = False
    while res.optimal and rounds < max_rounds:
        if time_limit is not None and time.perf_counter() - t0 > time_limit:
            timed_out = True
            break
        cuts = [c for c in _separate(instance, model, res.point, fams) if c.name not in present]
        if not cuts:
            break
        rounds += 1
        present.update(c.name for c in cuts)
        added += [(rounds, c) for c in cuts]
        model = model.with_constraints(cuts)
        res = solve_lp(model, exact=exact, instance=instance)
        bounds.append(res.objective)
    return CutLoopResult(res, added, bounds, rounds, timed_out)


def gap_pct(best_known, lp_value) -> float:
    if best_known == 0:
        raise ZeroDivisionError("best known objective is zero")
    if isinstance(lp_value, Fraction):
        return float(Fraction(100) * (best_known - lp_value) / best_known)
    return 100.0 * (best_known - lp_value) / best_known


def lp_gap(instance: Instance, formulation: str, cut_families: Iterable[str],
           best_known, max_rounds: int = MAX_ROUNDS,
           options: Optional[ModelOptions] = None) -> float:
    """``100 (w_B - w_LP) / w_B`` for the root bound after the cut loop."""
    if best_known == 0:
        raise ZeroDivisionError("best known objective is zero")
    loop = root_cut_loop(instance, formulation, cut_families, max_rounds, options)
    return gap_pct(best_known, loop.bound)
