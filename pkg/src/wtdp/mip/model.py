"""Linear models for the five formulations and their valid inequalities.

Naming: ``x_i`` vertex, ``y_i_j`` edge (``i < j``), ``z_i_j`` arc ``(i, j)``
(F1; for MA1 the undirected edge variable, ``i < j``), ``q_i`` external
cost of vertex ``i``.  Constraint names are ``<TAG>_<indices>`` with ``-``
and ``.`` in the tag replaced by ``_``.

Variables are ordered x, y, z, q; inside each block by vertex, edge
(lexicographic) or arc ``(i, j)`` by ``i`` then ``j``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence, Union

from ..graph import Instance

Number = Union[int, Fraction, float]

FORMULATIONS = ("F1", "F2", "MA1", "MA2", "MA3")
TAGS = ("TDOM", "TDOMY", "XZLINK1", "XZLINK2", "XZLINK2L", "YZLINK", "CLIQUE",
        "EXTCOSTS", "EXTCOSTS-L", "WTD1.3", "WTD1.4", "WTD1.5", "WTD1.6", "WTD1.7",
        "WTD2.3", "WTD2.4", "WTD3.2", "WTD3.3")
BINARY, CONTINUOUS, INTEGER = "binary", "continuous", "integer"
DEFAULT_EXTCOST_K = 5


class InvalidOptions(ValueError):
    pass


class MissingVariable(KeyError):
    pass


def tag_prefix(tag: str) -> str:
    return tag.replace("-", "_").replace(".", "_")


def tag_from_name(name: str) -> str:
    for tag in sorted(TAGS, key=len, reverse=True):
        p = tag_prefix(tag) + "_"
        if name.startswith(p):
            return tag
    raise ValueError(f"constraint name {name!r} does not carry a known tag")


def xv(i: int) -> str:
    return f"x_{i}"


def yv(i: int, j: int) -> str:
    return f"y_{min(i, j)}_{max(i, j)}"


def zv(i: int, j: int) -> str:
    return f"z_{i}_{j}"


def qv(i: int) -> str:
    return f"q_{i}"


@dataclass(frozen=True)
class Variable:
    name: str
    kind: str
    lower: Number = 0
    upper: Optional[Number] = None  # None = +inf
    obj: Number = 0


@dataclass(frozen=True)
class LinearConstraint:
    terms: tuple[tuple[str, Number], ...]
    sense: str  # "<=", ">=", "="
    rhs: Number
    tag: str
    name: str

    def __post_init__(self):
        if self.sense not in ("<=", ">=", "="):
            raise ValueError(f"bad sense {self.sense!r}")
        if any(c == 0 for _, c in self.terms):
            raise ValueError(f"{self.name}: zero coefficient")

    def lhs(self, values: Mapping[str, Number]) -> Number:
        total = 0
        for v, c in self.terms:
            try:
                total += c * values[v]
            except KeyError:
                raise MissingVariable(v) from None
        return total

    def slack(self, values: Mapping[str, Number]) -> Number:
        """Signed slack: negative means violated (absolute deviation for equalities)."""
        a = self.lhs(values)
        if self.sense == ">=":
            return a - self.rhs
        if self.sense == "<=":
            return self.rhs - a
        return -abs(a - self.rhs)


def make_constraint(coefs: Mapping[str, Number], sense: str, rhs: Number, tag: str,
                    suffix: str) -> LinearConstraint:
    """Drop zero coefficients, keep first-seen variable order."""
    terms = tuple((v, _norm(c)) for v, c in coefs.items() if c != 0)
    return LinearConstraint(terms, sense, _norm(rhs), tag, f"{tag_prefix(tag)}_{suffix}")


def _norm(c: Number) -> Number:
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c)
    return c


@dataclass(frozen=True)
class ModelOptions:
    lifted: bool = False
    tdomy: bool = False
    clique_cover: bool = False
    extcost_init_k: Optional[int] = None  # F2 only; None -> 5
    verbatim: bool = False  # MA2 only: (WTD2.3) with its printed "<=" sense

    def check(self, formulation: str) -> None:
        f = formulation
        if f not in FORMULATIONS:
            raise InvalidOptions(f"unknown formulation {f!r}")
        if self.lifted and f not in ("F1", "F2"):
            raise InvalidOptions("liftings exist only for F1 and F2")
        if (self.tdomy or self.clique_cover) and f not in ("F1", "F2"):
            raise InvalidOptions("TDOMY/CLIQUE are only defined for F1 and F2")
        if self.extcost_init_k is not None:
            if f != "F2":
                raise InvalidOptions("extcost_init_k applies to F2 only")
            if self.extcost_init_k < 1:
                raise InvalidOptions("extcost_init_k must be >= 1")
        if self.verbatim and f != "MA2":
            raise InvalidOptions("verbatim applies to MA2 only (MA3 is always verbatim)")


@dataclass
class MipModel:
    formulation: str
    variables: list[Variable]
    constraints: list[LinearConstraint]
    big_M: int
    big_L: int
    priorities: dict[str, int]
    options: ModelOptions = field(default_factory=ModelOptions)

    def __post_init__(self):
        self._index = {v.name: k for k, v in enumerate(self.variables)}

    @property
    def var_index(self) -> dict[str, int]:
        return self._index

    def variable(self, name: str) -> Variable:
        return self.variables[self._index[name]]

    def with_constraints(self, extra: Iterable[LinearConstraint]) -> "MipModel":
        return MipModel(self.formulation, list(self.variables),
                        self.constraints + list(extra), self.big_M, self.big_L,
                        dict(self.priorities), self.options)

    def relaxed(self) -> "MipModel":
        """Integrality dropped; integer/binary bounds kept."""
        vs = [replace(v, kind=CONTINUOUS, upper=1 if v.kind == BINARY else v.upper)
              for v in self.variables]
        return MipModel(self.formulation, vs, list(self.constraints), self.big_M,
                        self.big_L, dict(self.priorities), self.options)

    def count_by_tag(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for c in self.constraints:
            out[c.tag] = out.get(c.tag, 0) + 1
        return out

    def check_references(self) -> None:
        for c in self.constraints:
            for v, _ in c.terms:
                if v not in self._index:
                    raise MissingVariable(f"{c.name} references undeclared {v}")


# --- individual inequalities ------------------------------------------------

def tdom_constraint(instance: Instance, i: int) -> LinearConstraint:
    return make_constraint({xv(j): 1 for j in instance.adjacency[i]}, ">=", 1, "TDOM", str(i))


def tdomy_constraint(instance: Instance, i: int) -> LinearConstraint:
    coefs = {yv(u, v): 1 for u, v, _ in (instance.edges[e] for e in instance.incident_edges[i])}
    coefs[xv(i)] = -1
    return make_constraint(coefs, ">=", 0, "TDOMY", str(i))


def yzlink_constraint(i: int, j: int) -> LinearConstraint:
    i, j = min(i, j), max(i, j)
    return make_constraint({yv(i, j): 1, xv(i): -1, xv(j): -1}, ">=", -1, "YZLINK", f"{i}_{j}")


def clique_constraint(clique: Sequence[int]) -> LinearConstraint:
    """sum of y over E(C) >= sum of x over C - 1."""
    C = sorted(clique)
    coefs: dict[str, Number] = {}
    for a in range(len(C)):
        for b in range(a + 1, len(C)):
            coefs[yv(C[a], C[b])] = 1
    for i in C:
        coefs[xv(i)] = -1
    return make_constraint(coefs, ">=", -1, "CLIQUE", "_".join(map(str, C)))


def extcost_cut(instance: Instance, i: int, k: int, lifted: bool = False) -> LinearConstraint:
    """The ``k``-th (1-based) external-cost cut of vertex ``i`` over its cost-sorted neighbors.

    q_i >= c_k - sum_{k'<k} (c_k - c_k') x_k' - c_k x_i [+ sum_{k'<k} (c_k - c_k') y_{k' i}]
    """
    order = instance.sorted_neighbors[i]
    if not 1 <= k <= len(order):
        raise IndexError(f"k={k} outside 1..{len(order)} for vertex {i}")
    ci = instance.cost[i]
    ck = ci[order[k - 1]]
    coefs: dict[str, Number] = {qv(i): 1}
    for kp in order[:k - 1]:
        coefs[xv(kp)] = ck - ci[kp]
    coefs[xv(i)] = coefs.get(xv(i), 0) + ck
    if lifted:
        for kp in order[:k - 1]:
            coefs[yv(kp, i)] = -(ck - ci[kp])
    tag = "EXTCOSTS-L" if lifted else "EXTCOSTS"
    return make_constraint(coefs, ">=", ck, tag, f"{i}_{k}")


# --- formulations -----------------------------------------------------------

def _priorities(instance: Instance, variables: Sequence[Variable]) -> dict[str, int]:
    pr = {v.name: 0 for v in variables}
    for i in range(instance.n):
        pr[xv(i)] = 100 * instance.degree(i)
    return pr


def _xy_vars(instance: Instance, y_kind: str) -> list[Variable]:
    vs = [Variable(xv(i), BINARY, 0, 1, w) for i, w in enumerate(instance.vertex_weights)]
    vs += [Variable(yv(u, v), y_kind, 0, 1, c) for u, v, c in instance.edges]
    return vs


def arcs(instance: Instance) -> list[tuple[int, int]]:
    return [(i, j) for i in range(instance.n) for j in instance.adjacency[i]]


def _valid_cuts(instance: Instance, opts: ModelOptions) -> list[LinearConstraint]:
    from .separation import edge_clique_cover

    cons = []
    if opts.tdomy:
        cons += [tdomy_constraint(instance, i) for i in range(instance.n)]
    if opts.clique_cover:
        cons += [clique_constraint(C) for C in edge_clique_cover(instance)]
    return cons


def build_model(instance: Instance, formulation: str,
                options: Optional[ModelOptions] = None) -> MipModel:
    opts = options or ModelOptions()
    f = formulation.upper()
    opts.check(f)
    n = instance.n
    adj = instance.adjacency
    M, L = instance.max_degree, instance.max_edge_cost
    tdom = [tdom_constraint(instance, i) for i in range(n)]

    if f == "F1":
        vs = _xy_vars(instance, CONTINUOUS)
        vs += [Variable(zv(i, j), CONTINUOUS, 0, 1, instance.cost[i][j]) for i, j in arcs(instance)]
        cons = list(tdom)
        for i in range(n):
            coefs = {xv(i): 1}
            for j in adj[i]:
                coefs[zv(j, i)] = 1
            cons.append(make_constraint(coefs, "=", 1, "XZLINK1", str(i)))
        for i, j in arcs(instance):
            if opts.lifted:
                cons.append(make_constraint({yv(i, j): 1, zv(i, j): 1, xv(i): -1}, "<=", 0,
                                            "XZLINK2L", f"{i}_{j}"))
            else:
                cons.append(make_constraint({zv(i, j): 1, xv(i): -1}, "<=", 0,
                                            "XZLINK2", f"{i}_{j}"))
        cons += [yzlink_constraint(u, v) for u, v, _ in instance.edges]
        cons += _valid_cuts(instance, opts)

    elif f == "F2":
        vs = _xy_vars(instance, CONTINUOUS)
        vs += [Variable(qv(i), CONTINUOUS, 0, None, 1) for i in range(n)]
        cons = list(tdom)
        cons += [yzlink_constraint(u, v) for u, v, _ in instance.edges]
        k0 = opts.extcost_init_k or DEFAULT_EXTCOST_K
        for i in range(n):
            for k in range(1, min(k0, instance.degree(i)) + 1):
                cons.append(extcost_cut(instance, i, k, opts.lifted))
        cons += _valid_cuts(instance, opts)

    elif f == "MA1":
        vs = _xy_vars(instance, BINARY)
        vs += [Variable(zv(u, v), BINARY, 0, 1, 0) for u, v, _ in instance.edges]
        cons = list(tdom)
        E = [(u, v) for u, v, _ in instance.edges]
        cons += [make_constraint({xv(u): 1, xv(v): 1, yv(u, v): -1}, ">=", 0, "WTD1.3", f"{u}_{v}")
                 for u, v in E]
        for u, v in E:
            cons.append(make_constraint({xv(u): 1, zv(u, v): -1}, ">=", 0, "WTD1.4", f"{u}_{v}_{u}"))
            cons.append(make_constraint({xv(v): 1, zv(u, v): -1}, ">=", 0, "WTD1.4", f"{u}_{v}_{v}"))
        cons += [make_constraint({zv(u, v): 1, xv(u): -1, xv(v): -1}, ">=", -1, "WTD1.5", f"{u}_{v}")
                 for u, v in E]
        cons += [make_constraint({yv(u, v): 1, zv(u, v): -1}, ">=", 0, "WTD1.6", f"{u}_{v}")
                 for u, v in E]
        cons += [_wtd17(instance, i) for i in range(n)]

    elif f == "MA2":
        vs = _xy_vars(instance, BINARY)
        cons = list(tdom)
        E = [(u, v) for u, v, _ in instance.edges]
        cons += [make_constraint({xv(u): 1, xv(v): 1, yv(u, v): -1}, ">=", 0, "WTD1.3", f"{u}_{v}")
                 for u, v in E]
        cons += [_wtd17(instance, i) for i in range(n)]
        sense = "<=" if opts.verbatim else ">="
        cons += [make_constraint({yv(u, v): 1, xv(u): -1, xv(v): -1}, sense, -1, "WTD2.3", f"{u}_{v}")
                 for u, v in E]
        for i in range(n):
            coefs: dict[str, Number] = {yv(*instance.edges[e][:2]): 1 for e in instance.incident_edges[i]}
            coefs[xv(i)] = -M
            cons.append(make_constraint(coefs, "<=", 1, "WTD2.4", str(i)))

    else:  # MA3, transcribed verbatim
        vs = [Variable(xv(i), BINARY, 0, 1, w) for i, w in enumerate(instance.vertex_weights)]
        vs += [Variable(qv(i), INTEGER, 0, n * L, Fraction(1, 2)) for i in range(n)]
        cons = list(tdom)
        ci = instance.cost
        for i in range(n):
            for j in adj[i]:
                ce = ci[i][j]
                coefs = {qv(i): 1, xv(i): 2 * L - 2 * ce}
                for jp in adj[i]:
                    if ci[i][jp] <= ce:
                        coefs[xv(jp)] = coefs.get(xv(jp), 0) + 2 * L
                cons.append(make_constraint(coefs, ">=", 0, "WTD3.2", f"{i}_{j}"))
        for i in range(n):
            total = sum(ci[i][j] for j in adj[i])
            coefs = {qv(i): 1, xv(i): -total}
            for j in adj[i]:
                coefs[xv(j)] = coefs.get(xv(j), 0) - ci[i][j]
            cons.append(make_constraint(coefs, ">=", -total, "WTD3.3", str(i)))

    model = MipModel(f, vs, cons, M, L, _priorities(instance, vs), opts)
    model.check_references()
    return model


def _wtd17(instance: Instance, i: int) -> LinearConstraint:
    coefs: dict[str, Number] = {xv(i): 1}
    for e in instance.incident_edges[i]:
        u, v, _ = instance.edges[e]
        coefs[yv(u, v)] = 1
    return make_constraint(coefs, ">=", 1, "WTD1.7", str(i))


# --- integral encodings -----------------------------------------------------

def _cheapest_dominator(instance: Instance, mask: Sequence[bool], i: int) -> int:
    ci = instance.cost[i]
    return min((j for j in instance.adjacency[i] if mask[j]), key=lambda j: (ci[j], j))


def encode_solution(instance: Instance, model: MipModel, members: Iterable[int]) -> dict[str, Number]:
    """Minimum-cost completion of ``x = chi(D)`` to the other variables of ``model``.

    ``D`` must be a total dominating set.  For ``q`` the value is the largest
    right-hand side implied by the model's own constraints on ``q_i`` (and 0).
    """
    n = instance.n
    mask = [False] * n
    for i in members:
        mask[i] = True
    vals: dict[str, Number] = {v.name: 0 for v in model.variables}
    for i in range(n):
        vals[xv(i)] = int(mask[i])
    f = model.formulation
    if f in ("F1", "F2", "MA1", "MA2"):
        for u, v, _ in instance.edges:
            vals[yv(u, v)] = int(mask[u] and mask[v])
    if f == "MA1":
        for u, v, _ in instance.edges:
            vals[zv(u, v)] = int(mask[u] and mask[v])
    if f in ("F1", "MA1", "MA2"):
        for i in range(n):
            if not mask[i]:
                j = _cheapest_dominator(instance, mask, i)
                if f == "F1":
                    vals[zv(j, i)] = 1
                else:
                    vals[yv(i, j)] = 1
    if f in ("F2", "MA3"):
        need: dict[str, Number] = {}
        for c in model.constraints:
            for q, coef in c.terms:
                if not q.startswith("q_"):
                    continue
                if not ((c.sense == ">=" and coef > 0) or (c.sense == "<=" and coef < 0)):
                    continue
                rest = sum(a * vals[v] for v, a in c.terms if v != q)
                bound = Fraction(c.rhs - rest) / coef
                if bound > need.get(q, 0):
                    need[q] = bound
        for i in range(n):
            q = qv(i)
            b = Fraction(need.get(q, 0))
            if model.variable(q).kind == INTEGER:
                b = Fraction(-((-b.numerator) // b.denominator))
            vals[q] = _norm(b)
    return vals


# --- verification -----------------------------------------------------------

@dataclass
class VerifyReport:
    objective: Number
    violated: list[tuple[str, str, Number]]  # (name, tag, slack)
    bound_violations: list[tuple[str, str]]

    @property
    def feasible(self) -> bool:
        return not self.violated and not self.bound_violations


def model_objective(model: MipModel, values: Mapping[str, Number]) -> Number:
    total = 0
    for v in model.variables:
        if v.obj:
            if v.name not in values:
                raise MissingVariable(v.name)
            total += v.obj * values[v.name]
    return _norm(total) if isinstance(total, Fraction) else total


def verify_assignment(model: MipModel, assignment: Mapping[str, Number],
                      tol: Number = 0) -> VerifyReport:
    for v in model.variables:
        if v.name not in assignment:
            raise MissingVariable(v.name)
    bad_bounds = []
    for v in model.variables:
        val = assignment[v.name]
        if val < v.lower - tol or (v.upper is not None and val > v.upper + tol):
            bad_bounds.append((v.name, f"value {val} outside [{v.lower}, {v.upper}]"))
        elif v.kind in (BINARY, INTEGER) and abs(val - round(val)) > tol:
            bad_bounds.append((v.name, f"value {val} not integral"))
    violated = []
    for c in model.constraints:
        s = c.slack(assignment)
        if s < -tol:
            violated.append((c.name, c.tag, s))
    return VerifyReport(model_objective(model, assignment), violated, bad_bounds)
