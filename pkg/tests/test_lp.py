from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog

from wtdp.lp import (INFEASIBLE, OPTIMAL, UNBOUNDED, gap_pct, lp_gap, root_cut_loop, solve_bounded,
                     solve_lp)
from wtdp.mip import ModelOptions, build_model, verify_assignment

from conftest import random_suite

TOL = 1e-6


def scipy_solve(c, A, senses, b, lower, upper):
    A = np.asarray(A, dtype=float)
    A_ub, b_ub, A_eq, b_eq = [], [], [], []
    for row, s, r in zip(A, senses, b):
        if s == "<=":
            A_ub.append(row), b_ub.append(r)
        elif s == ">=":
            A_ub.append(-row), b_ub.append(-r)
        else:
            A_eq.append(row), b_eq.append(r)
    return linprog(c, A_ub=A_ub or None, b_ub=b_ub or None, A_eq=A_eq or None, b_eq=b_eq or None,
                   bounds=list(zip(lower, upper)), method="highs")


# --- the simplex on its own ------------------------------------------------------

def test_two_variable_example():
    r = solve_bounded([2, 3], [[1, 1]], [">="], [1], [0, 0], [1, 1])
    assert r.status == OPTIMAL and r.objective == pytest.approx(2)
    assert r.x[0] == pytest.approx(1) and r.x[1] == pytest.approx(0)
    e = solve_bounded([2, 3], [[1, 1]], [">="], [1], [0, 0], [1, 1], exact=True)
    assert e.objective == 2 and isinstance(e.objective, Fraction)


def test_infeasible_and_unbounded():
    assert solve_bounded([1], [[1]], [">="], [2], [0], [1]).status == INFEASIBLE
    assert solve_bounded([-1, 0], [[1, -1]], ["<="], [0], [0, 0], [None, None]).status == UNBOUNDED
    assert solve_bounded([1, 1], [[1, 1], [1, 1]], ["<=", ">="], [1, 2], [0, 0],
                         [None, None], exact=True).status == INFEASIBLE


def test_classic_cycling_example_terminates():
    # Beale's example cycles under the plain largest-coefficient rule
    c = [Fraction(-3, 4), 20, Fraction(-1, 2), 6]
    A = [[Fraction(1, 4), -8, -1, 9], [Fraction(1, 2), -12, Fraction(-1, 2), 3], [0, 0, 1, 0]]
    for exact in (False, True):
        r = solve_bounded(c, A, ["<="] * 3, [0, 0, 1], [0] * 4, [None] * 4, exact=exact)
        assert r.status == OPTIMAL
        assert float(r.objective) == pytest.approx(-1.25)


def test_certificate_fields():
    r = solve_bounded([1, 2, 0], [[1, 1, 1], [1, -1, 0]], [">=", "="], [2, 0], [0, 0, 0],
                      [5, 5, 1])
    assert r.status == OPTIMAL
    assert r.duality_gap < TOL and r.cs_residual < TOL and r.primal_residual < 1e-7


@st.composite
def random_lps(draw):
    m = draw(st.integers(1, 6))
    n = draw(st.integers(1, 6))
    ints = st.integers(-4, 4)
    A = [[draw(ints) for _ in range(n)] for _ in range(m)]
    senses = [draw(st.sampled_from(["<=", ">=", "="])) for _ in range(m)]
    b = [draw(ints) for _ in range(m)]
    c = [draw(ints) for _ in range(n)]
    lower = [draw(st.integers(-2, 0)) for _ in range(n)]
    upper = [draw(st.one_of(st.none(), st.integers(1, 3))) for _ in range(n)]
    return c, A, senses, b, lower, upper


@settings(max_examples=300, deadline=None)
@given(random_lps(), st.booleans())
def test_matches_scipy(lp, exact):
    c, A, senses, b, lower, upper = lp
    ours = solve_bounded(c, A, senses, b, lower, upper, exact=exact)
    ref = scipy_solve(c, A, senses, b, lower, upper)
    status = {0: OPTIMAL, 2: INFEASIBLE, 3: UNBOUNDED}[ref.status]
    assert ours.status == status
    if status == OPTIMAL:
        assert float(ours.objective) == pytest.approx(ref.fun, abs=1e-7)
        assert float(ours.duality_gap) < TOL
        assert float(ours.cs_residual) < TOL
        assert float(ours.primal_residual) < 1e-7


# --- relaxations of the models ------------------------------------------------------

def test_ex9_relaxations(ex9):
    f1 = solve_lp(build_model(ex9, "F1"), instance=ex9)
    f2 = solve_lp(build_model(ex9, "F2"), instance=ex9)
    assert f1.optimal and f1.objective <= 38
    assert f1.objective == pytest.approx(f2.objective, abs=TOL)
    ex = solve_lp(build_model(ex9, "F1"), exact=True)
    assert float(ex.objective) == pytest.approx(f1.objective, abs=1e-9)


def test_lp_point_is_feasible(ex9):
    m = build_model(ex9, "F1", ModelOptions(tdomy=True, clique_cover=True))
    res = solve_lp(m, exact=True)
    rep = verify_assignment(m.relaxed(), res.values)
    assert rep.feasible
    assert rep.objective == res.objective


def test_certificate_on_models():
    for inst in random_suite(6, 6, 12, seed=17):
        for form in ("F1", "F2", "MA1", "MA2"):
            r = solve_lp(build_model(inst, form))
            assert r.optimal
            assert abs(r.objective - r.dual_objective) < TOL
            assert r.cs_residual < TOL and r.primal_residual < 1e-7


def test_benders_identity_and_liftings():
    for inst in random_suite(12, 5, 12, seed=18):
        f1 = solve_lp(build_model(inst, "F1")).objective
        full = ModelOptions(extcost_init_k=inst.max_degree)
        f2 = solve_lp(build_model(inst, "F2", full)).objective
        f1l = solve_lp(build_model(inst, "F1", ModelOptions(lifted=True))).objective
        f2l = solve_lp(build_model(inst, "F2", ModelOptions(extcost_init_k=inst.max_degree,
                                                            lifted=True))).objective
        assert f1 == pytest.approx(f2, abs=TOL)
        assert f1l == pytest.approx(f1, abs=TOL)
        assert f2l == pytest.approx(f2, abs=TOL)


# --- cut loop ----------------------------------------------------------------------

def test_cut_loop_ex9_examples(ex9):
    f2 = root_cut_loop(ex9, "F2", ["EXTCOSTS"], options=ModelOptions(extcost_init_k=5))
    assert f2.added_cuts == [] and f2.rounds == 0
    plain = solve_lp(build_model(ex9, "F1")).objective
    f1 = root_cut_loop(ex9, "F1", ["TDOMY", "CLIQUE"])
    assert plain - TOL <= f1.bound <= 37 + TOL


def test_cut_loop_monotone_and_ordered():
    for inst in random_suite(8, 6, 11, seed=19):
        for form, fams in (("F1", ["TDOMY", "CLIQUE"]), ("F2", ["TDOMY", "CLIQUE", "EXTCOSTS"])):
            opts = ModelOptions(extcost_init_k=1) if form == "F2" else None
            full = root_cut_loop(inst, form, fams, options=opts)
            assert full.rounds <= 10
            assert all(a <= b + TOL for a, b in zip(full.bounds, full.bounds[1:]))
            for single in (["TDOMY"], ["CLIQUE"], []):
                sub = root_cut_loop(inst, form, single, options=opts)
                assert all(a <= b + TOL for a, b in zip(sub.bounds, sub.bounds[1:]))
                assert sub.bounds[0] == pytest.approx(full.bounds[0], abs=TOL)
                assert full.bound >= sub.bound - TOL


def test_cut_loop_round_limit():
    inst = random_suite(1, 10, 10, ps=(0.6,), seed=3)[0]
    r = root_cut_loop(inst, "F2", ["TDOMY", "CLIQUE"], max_rounds=1,
                      options=ModelOptions(extcost_init_k=1))
    assert r.rounds <= 1 and len(r.bounds) == r.rounds + 1
    assert all(rnd == 1 for rnd, _ in r.added_cuts)


def test_cut_loop_argument_checks(ex9):
    with pytest.raises(ValueError):
        root_cut_loop(ex9, "MA1")
    with pytest.raises(ValueError):
        root_cut_loop(ex9, "F1", ["EXTCOSTS"])
    with pytest.raises(ValueError):
        root_cut_loop(ex9, "F1", ["BOGUS"])


def test_gap_formula():
    assert gap_pct(38, 38) == 0
    assert f"{gap_pct(100, 80):.2f}" == "20.00"
    with pytest.raises(ZeroDivisionError):
        gap_pct(0, 1)


def test_lp_gap_cuts_never_hurt(ex9):
    none = lp_gap(ex9, "F1", [], 37)
    for fams in (["TDOMY"], ["CLIQUE"], ["TDOMY", "CLIQUE"]):
        assert lp_gap(ex9, "F1", fams, 37) <= none + TOL
    assert 0 <= lp_gap(ex9, "F1", ["TDOMY", "CLIQUE"], 37) < none
