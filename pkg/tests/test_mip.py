import itertools
import random
from fractions import Fraction

import networkx as nx
import numpy as np
import pytest
from scipy.optimize import linprog

from wtdp.graph import evaluate, example9_vertices
from wtdp.mip import (FractionalPoint, InvalidOptions, MissingVariable, ModelOptions,
                      build_model, clique_constraint, edge_clique_cover, encode_solution,
                      extcost_cut, extcost_rhs, model_from_text, model_to_text,
                      parse_assignment, priorities_to_text, read_priorities, separate_clique,
                      separate_extcost, separate_tdomy, tdomy_constraint, verify_assignment,
                      violation, write_model, write_priorities)
from wtdp.mip.lpfile import LpFormatError
from wtdp.mip.model import xv, yv, zv, qv

from conftest import complete_graph, feasible_sets, naive_objective, random_suite

A, B, C, D, E, F, G, H, I = range(9)


def terms(con):
    return dict(con.terms)


# --- model construction ---------------------------------------------------------

def test_ex9_f1_counts(ex9):
    m = build_model(ex9, "F1")
    assert len(m.variables) == 45
    assert len(m.constraints) == 54
    assert m.count_by_tag() == {"TDOM": 9, "XZLINK1": 9, "XZLINK2": 24, "YZLINK": 12}


def test_ex9_f2_counts(ex9):
    m = build_model(ex9, "F2", ModelOptions(extcost_init_k=5))
    assert len(m.variables) == 30
    assert len(m.constraints) == 45
    assert m.count_by_tag() == {"TDOM": 9, "YZLINK": 12, "EXTCOSTS": 24}
    assert build_model(ex9, "F2").count_by_tag() == m.count_by_tag()


def test_ex9_big_constants(ex9):
    m = build_model(ex9, "MA2")
    assert m.big_M == 4 and m.big_L == max(c for _, _, c in ex9.edges)


def test_option_flags_add_families(ex9):
    m = build_model(ex9, "F1", ModelOptions(lifted=True, tdomy=True, clique_cover=True))
    counts = m.count_by_tag()
    assert counts["XZLINK2L"] == 24 and "XZLINK2" not in counts
    assert counts["TDOMY"] == 9 and counts["CLIQUE"] == 12
    m2 = build_model(ex9, "F2", ModelOptions(lifted=True, extcost_init_k=2))
    assert m2.count_by_tag()["EXTCOSTS-L"] == sum(min(2, ex9.degree(i)) for i in range(9))


@pytest.mark.parametrize("form,opts", [
    ("F1", ModelOptions(extcost_init_k=3)), ("MA1", ModelOptions(lifted=True)),
    ("MA2", ModelOptions(tdomy=True)), ("F2", ModelOptions(extcost_init_k=0)),
    ("F1", ModelOptions(verbatim=True)), ("F9", ModelOptions())])
def test_invalid_options(ex9, form, opts):
    with pytest.raises(InvalidOptions):
        build_model(ex9, form, opts)


def test_priorities(ex9, tmp_path):
    m = build_model(ex9, "F1")
    assert m.priorities[xv(E)] == 400
    assert all(m.priorities[v.name] == 0 for v in m.variables if not v.name.startswith("x_"))
    write_priorities(m, tmp_path / "f.prio")
    assert "x_4 400" in (tmp_path / "f.prio").read_text().splitlines()
    assert read_priorities(tmp_path / "f.prio") == {k: v for k, v in m.priorities.items() if v}


def test_variable_naming_and_order(ex9):
    m = build_model(ex9, "F1")
    names = [v.name for v in m.variables]
    assert names[:9] == [f"x_{i}" for i in range(9)]
    ys = [n for n in names if n.startswith("y_")]
    assert ys == [f"y_{u}_{v}" for u, v, _ in ex9.edges]
    zs = [n for n in names if n.startswith("z_")]
    assert zs == [f"z_{i}_{j}" for i in range(9) for j in ex9.adjacency[i]]


# --- external-cost cuts ----------------------------------------------------------

def test_extcost_examples(ex9):
    assert ex9.sorted_neighbors[E] == (B, F, D, H)
    c1 = extcost_cut(ex9, E, 1)
    assert terms(c1) == {qv(E): 1, xv(E): 3} and c1.sense == ">=" and c1.rhs == 3
    c3 = extcost_cut(ex9, E, 3)
    assert terms(c3) == {qv(E): 1, xv(B): 2, xv(F): 2, xv(E): 5} and c3.rhs == 5
    c3l = extcost_cut(ex9, E, 3, lifted=True)
    assert terms(c3l) == {**terms(c3), yv(B, E): -2, yv(E, F): -2}
    assert c3l.tag == "EXTCOSTS-L"
    with pytest.raises(IndexError):
        extcost_cut(ex9, E, 5)
    with pytest.raises(IndexError):
        extcost_cut(ex9, E, 0)


def test_extcost_max_rhs_is_external_cost():
    # for integral x, the largest right-hand side over k equals the external cost
    for inst in random_suite(20, 4, 9, seed=2):
        for Dset in itertools.islice(feasible_sets(inst), 40):
            x = [1 if i in Dset else 0 for i in range(inst.n)]
            for i in range(inst.n):
                best = max(extcost_rhs(inst, i, k, x) for k in range(1, inst.degree(i) + 1))
                want = 0 if x[i] else min(inst.cost[i][j] for j in inst.adjacency[i] if x[j])
                assert max(best, 0) == want


# --- clique cover -----------------------------------------------------------------

def _nx_graph(inst):
    g = nx.Graph()
    g.add_nodes_from(range(inst.n))
    g.add_edges_from((u, v) for u, v, _ in inst.edges)
    return g


def test_ex9_is_triangle_free_and_cover_is_edges(ex9):
    assert sum(nx.triangles(_nx_graph(ex9)).values()) == 0
    cover = edge_clique_cover(ex9)
    assert len(cover) == 12 and all(len(c) == 2 for c in cover)


def test_k3_k4_covers():
    assert edge_clique_cover(complete_graph(3)) == [[0, 1, 2]]
    assert edge_clique_cover(complete_graph(4)) == [[0, 1, 2, 3]]


def test_cover_covers_every_edge_with_cliques():
    for inst in random_suite(30, 5, 15, seed=4):
        g = _nx_graph(inst)
        covered = set()
        for C in edge_clique_cover(inst):
            assert all(g.has_edge(a, b) for a, b in itertools.combinations(C, 2))
            covered |= {(min(a, b), max(a, b)) for a, b in itertools.combinations(C, 2)}
        assert covered == {(u, v) for u, v, _ in inst.edges}


# --- separation -------------------------------------------------------------------

def test_clique_separation_examples(ex9):
    k3 = complete_graph(3)
    cuts = separate_clique(k3, FractionalPoint([1, 1, 1], [0, 0, 0]))
    assert len(cuts) == 1
    vals = FractionalPoint([1, 1, 1], [0, 0, 0]).as_values(k3)
    assert violation(cuts[0], vals) == pytest.approx(2)
    assert separate_clique(ex9, FractionalPoint([0.5] * 9, [0] * 12)) == []


def test_tdomy_separation_examples(ex9):
    x = [0] * 9
    x[E] = 1
    cuts = separate_tdomy(ex9, FractionalPoint(x, [0] * 12))
    assert [c.name for c in cuts] == [tdomy_constraint(ex9, E).name]
    assert violation(cuts[0], FractionalPoint(x, [0] * 12).as_values(ex9)) == pytest.approx(1)
    assert separate_tdomy(ex9, FractionalPoint([0] * 9, [0] * 12)) == []


def test_extcost_separation_examples(ex9):
    cuts = separate_extcost(ex9, FractionalPoint([0] * 9, [0] * 12, q=[0] * 9))
    names = {c.name for c in cuts}
    assert extcost_cut(ex9, E, 1).name in names
    c = next(c for c in cuts if c.name == extcost_cut(ex9, E, 1).name)
    assert violation(c, FractionalPoint([0] * 9, [0] * 12, q=[0] * 9).as_values(ex9)) == 3
    # x_i = 1 makes every cut of i non-positive on the right, so q >= 0 satisfies it
    x = [1] * 9
    assert separate_extcost(ex9, FractionalPoint(x, [0] * 12, q=[0] * 9)) == []
    with pytest.raises(ValueError):
        separate_extcost(ex9, FractionalPoint(x, [0] * 12))


def _integral_point(inst, Dset):
    x = [1 if i in Dset else 0 for i in range(inst.n)]
    y = [x[u] * x[v] for u, v, _ in inst.edges]
    q = [0 if x[i] else min(inst.cost[i][j] for j in inst.adjacency[i] if x[j])
         for i in range(inst.n)]
    return FractionalPoint(x, y, q)


def test_separators_quiet_on_integral_points():
    for inst in random_suite(15, 4, 9, seed=6):
        for Dset in itertools.islice(feasible_sets(inst), 30):
            pt = _integral_point(inst, Dset)
            assert separate_clique(inst, pt) == []
            assert separate_tdomy(inst, pt) == []
            assert separate_extcost(inst, pt) == []
            assert separate_extcost(inst, pt, lifted=True) == []


def test_separated_cliques_are_violated_by_more_than_eps():
    rnd = random.Random(3)
    for inst in random_suite(20, 5, 12, seed=7):
        for _ in range(5):
            pt = FractionalPoint([rnd.random() for _ in range(inst.n)],
                                 [rnd.random() * 0.3 for _ in inst.edges])
            vals = pt.as_values(inst)
            for cut in separate_clique(inst, pt):
                assert violation(cut, vals) > 1e-6


# --- validity of the inequalities (exhaustive) ------------------------------------

def all_valid_inequalities(inst):
    """TDOMY, CLIQUE over every clique (networkx oracle), XZLINK2L, EXTCOSTS(-L) for every k."""
    cons = [tdomy_constraint(inst, i) for i in range(inst.n)]
    cons += [clique_constraint(C) for C in nx.enumerate_all_cliques(_nx_graph(inst)) if len(C) >= 2]
    for i in range(inst.n):
        for k in range(1, inst.degree(i) + 1):
            cons += [extcost_cut(inst, i, k), extcost_cut(inst, i, k, lifted=True)]
    lifted_f1 = build_model(inst, "F1", ModelOptions(lifted=True))
    cons += [c for c in lifted_f1.constraints if c.tag == "XZLINK2L"]
    return cons


def validity_violations(inst):
    cons = all_valid_inequalities(inst)
    f1 = build_model(inst, "F1", ModelOptions(lifted=True))
    f2 = build_model(inst, "F2", ModelOptions(extcost_init_k=inst.max_degree))
    bad = []
    for Dset in feasible_sets(inst):
        vals = dict(encode_solution(inst, f1, Dset))
        vals.update(encode_solution(inst, f2, Dset))
        bad += [(Dset, c.name) for c in cons if c.slack(vals) < 0]
    return bad


def test_valid_inequalities_never_cut_integral_points():
    for inst in random_suite(12, 4, 8, seed=10):
        assert validity_violations(inst) == []


def test_validity_on_ex9(ex9):
    assert validity_violations(ex9) == []


# --- encodings and formulation equivalence ------------------------------------------

@pytest.mark.parametrize("form", ["F1", "F2", "MA1", "MA2"])
def test_ex9_encodings_verify(ex9, form):
    m = build_model(ex9, form)
    rep = verify_assignment(m, encode_solution(ex9, m, example9_vertices("CDFG")))
    assert rep.feasible and rep.objective == 38
    rep = verify_assignment(m, encode_solution(ex9, m, example9_vertices("ADFI")))
    assert rep.feasible and rep.objective == 37


def ex9_hand_assignment(ex9, model):
    vals = {v.name: 0 for v in model.variables}
    for i in example9_vertices("CDFG"):
        vals[xv(i)] = 1
    vals[yv(C, F)] = vals[yv(D, G)] = 1
    for j, i in [(D, A), (C, B), (F, E), (G, H), (F, I)]:
        vals[zv(j, i)] = 1
    return vals


def test_ex9_hand_encoding(ex9):
    m = build_model(ex9, "F1")
    vals = ex9_hand_assignment(ex9, m)
    rep = verify_assignment(m, vals)
    assert rep.feasible and rep.objective == 38
    vals[zv(F, E)] = 0
    vals[zv(B, E)] = 1
    rep = verify_assignment(m, vals)
    assert not rep.feasible
    assert [(name, tag) for name, tag, _ in rep.violated] == [(f"XZLINK2_{B}_{E}", "XZLINK2")]


def test_all_zero_violates_every_tdom(ex9):
    m = build_model(ex9, "F1")
    rep = verify_assignment(m, {v.name: 0 for v in m.variables})
    assert sorted(n for n, t, _ in rep.violated if t == "TDOM") == sorted(f"TDOM_{i}" for i in range(9))


def test_missing_variable(ex9):
    m = build_model(ex9, "F1")
    vals = {v.name: 0 for v in m.variables}
    del vals["x_0"]
    with pytest.raises(MissingVariable):
        verify_assignment(m, vals)


def test_ma2_verbatim_rejects_encoding(ex9):
    m = build_model(ex9, "MA2", ModelOptions(verbatim=True))
    rep = verify_assignment(m, encode_solution(ex9, m, example9_vertices("CDFG")))
    assert not rep.feasible
    assert {t for _, t, _ in rep.violated} == {"WTD2.3"}


def _completion_lp(inst, model, Dset):
    """Minimum model objective with x fixed to the indicator of D, by scipy's LP solver."""
    names = [v.name for v in model.variables]
    idx = {n: k for k, n in enumerate(names)}
    cvec = np.array([float(v.obj) for v in model.variables])
    A_ub, b_ub, A_eq, b_eq = [], [], [], []
    for con in model.constraints:
        row = np.zeros(len(names))
        for n, a in con.terms:
            row[idx[n]] = float(a)
        if con.sense == "<=":
            A_ub.append(row), b_ub.append(float(con.rhs))
        elif con.sense == ">=":
            A_ub.append(-row), b_ub.append(-float(con.rhs))
        else:
            A_eq.append(row), b_eq.append(float(con.rhs))
    bounds = []
    for v in model.variables:
        if v.name.startswith("x_"):
            val = 1 if int(v.name[2:]) in Dset else 0
            bounds.append((val, val))
        else:
            bounds.append((float(v.lower), None if v.upper is None else float(v.upper)))
    res = linprog(cvec, A_ub=A_ub or None, b_ub=b_ub or None, A_eq=A_eq or None,
                  b_eq=b_eq or None, bounds=bounds, method="highs")
    assert res.status == 0
    return res.fun


def test_completions_are_minimum_cost():
    # the encoded completion is feasible and no cheaper completion exists (LP oracle)
    for inst in random_suite(8, 4, 7, seed=13):
        for form in ("F1", "F2"):
            m = build_model(inst, form, ModelOptions(extcost_init_k=inst.max_degree)
                            if form == "F2" else None)
            for Dset in itertools.islice(feasible_sets(inst), 15):
                want = naive_objective(inst, Dset)
                rep = verify_assignment(m, encode_solution(inst, m, Dset))
                assert rep.feasible and rep.objective == want
                assert _completion_lp(inst, m, Dset) == pytest.approx(want, abs=1e-7)


def test_formulation_equivalence_small_suite():
    for inst in random_suite(10, 4, 8, seed=14):
        # F2 needs the whole external-cost family; the default k=5 model is completed by separation
        models = [build_model(inst, f) for f in ("F1", "MA1", "MA2")]
        models.append(build_model(inst, "F2", ModelOptions(extcost_init_k=inst.max_degree)))
        for Dset in feasible_sets(inst):
            want = evaluate(inst, Dset).total
            for m in models:
                rep = verify_assignment(m, encode_solution(inst, m, Dset))
                assert rep.feasible and rep.objective == want, (m.formulation, Dset)


# --- LP file export -------------------------------------------------------------

@pytest.mark.parametrize("form,opts", [
    ("F1", ModelOptions()), ("F1", ModelOptions(lifted=True, tdomy=True, clique_cover=True)),
    ("F2", ModelOptions(extcost_init_k=2, lifted=True)), ("MA1", ModelOptions()),
    ("MA2", ModelOptions(verbatim=True)), ("MA3", ModelOptions())])
def test_lp_roundtrip(ex9, form, opts):
    m = build_model(ex9, form, opts)
    text = model_to_text(m)
    back = model_from_text(text)
    assert back.formulation == m.formulation and back.options == m.options
    assert back.variables == m.variables
    assert back.constraints == m.constraints
    assert (back.big_M, back.big_L) == (m.big_M, m.big_L)
    assert model_to_text(back) == text


def test_export_is_byte_identical(ex9, tmp_path):
    write_model(build_model(ex9, "F1"), tmp_path / "a.lp")
    write_model(build_model(ex9, "F1"), tmp_path / "b.lp")
    assert (tmp_path / "a.lp").read_bytes() == (tmp_path / "b.lp").read_bytes()
    assert priorities_to_text(build_model(ex9, "F1")) == priorities_to_text(build_model(ex9, "F1"))


def test_lp_sections(ex9):
    text = model_to_text(build_model(ex9, "MA3"))
    for head in ("Minimize", "Subject To", "Bounds", "Binaries", "Generals", "End"):
        assert head in text.splitlines()


def test_bad_lp_and_assignment_text():
    with pytest.raises(LpFormatError):
        model_from_text("Minimize\n obj: x_0\nSubject To\n c: x_0 >=\nEnd\n")
    with pytest.raises(LpFormatError):
        parse_assignment("x_0 1 2\n")
    assert parse_assignment("# c\nx_0 1\ny_0_1 1/2\nz 0.25\n") == {
        "x_0": 1, "y_0_1": Fraction(1, 2), "z": Fraction(1, 4)}
