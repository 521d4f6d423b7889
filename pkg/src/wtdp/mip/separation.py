"""Separation routines for TDOMY, CLIQUE and EXTCOSTS inequalities."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Optional, Sequence

from ..graph import Instance
from .model import (LinearConstraint, clique_constraint, extcost_cut, qv,
                    tdomy_constraint, xv, yv, zv)

CLIQUE_GROWTH_EPS = 1e-4
VIOLATION_EPS = 1e-6


@dataclass
class FractionalPoint:
    """LP values indexed by vertex (``x``, ``q``) and by edge id (``y``)."""

    x: Sequence[float]
    y: Sequence[float]
    q: Optional[Sequence[float]] = None
    z: Optional[Mapping[tuple[int, int], float]] = None

    @classmethod
    def from_values(cls, instance: Instance, values: Mapping[str, float]) -> "FractionalPoint":
        x = [values.get(xv(i), 0.0) for i in range(instance.n)]
        y = [values.get(yv(u, v), 0.0) for u, v, _ in instance.edges]
        q = None
        if qv(0) in values:
            q = [values[qv(i)] for i in range(instance.n)]
        z = None
        if instance.n and instance.adjacency[0] and zv(0, instance.adjacency[0][0]) in values:
            z = {(i, j): values[zv(i, j)] for i in range(instance.n) for j in instance.adjacency[i]}
        return cls(x, y, q, z)

    def as_values(self, instance: Instance) -> dict[str, float]:
        vals = {xv(i): v for i, v in enumerate(self.x)}
        vals.update({yv(u, v): self.y[e] for e, (u, v, _) in enumerate(instance.edges)})
        if self.q is not None:
            vals.update({qv(i): v for i, v in enumerate(self.q)})
        if self.z is not None:
            vals.update({zv(i, j): v for (i, j), v in self.z.items()})
        return vals


def violation(constraint: LinearConstraint, values: Mapping[str, float]) -> float:
    """Positive amount by which ``constraint`` is violated (<= 0 when satisfied)."""
    return -constraint.slack(values)


def _grow_clique(instance: Instance, seed: tuple[int, int],
                 key: Callable[[int], float],
                 accept: Callable[[list[int], int], bool]) -> list[int]:
    """Grow ``seed`` greedily: scan common neighbors by ``key`` descending, add the first accepted."""
    adj = instance.adjacency
    C = list(seed)
    common = set(adj[seed[0]]) & set(adj[seed[1]])
    while common:
        for k in sorted(common, key=lambda k: (-key(k), k)):
            if accept(C, k):
                C.append(k)
                common &= set(adj[k])
                break
        else:
            break
    return sorted(C)


def _clique_edges(instance: Instance, C: Sequence[int]) -> list[int]:
    return [instance.edge_id(C[a], C[b]) for a in range(len(C)) for b in range(a + 1, len(C))]


def edge_clique_cover(instance: Instance) -> list[list[int]]:
    """Cliques covering every edge, grown from uncovered edges by descending degree."""
    covered = set()
    cliques = []
    for e, (u, v, _) in enumerate(instance.edges):
        if e in covered:
            continue
        C = _grow_clique(instance, (u, v), instance.degree, lambda C, k: True)
        cliques.append(C)
        covered.update(_clique_edges(instance, C))
    return cliques


def separate_clique(instance: Instance, point: FractionalPoint, eps: float = VIOLATION_EPS,
                    growth_eps: float = CLIQUE_GROWTH_EPS) -> list[LinearConstraint]:
    x, y = point.x, point.y
    eid = instance.edge_id

    def score(k):
        return instance.degree(k) * (x[k] + growth_eps)

    def accept(C, k):
        return x[k] - sum(y[eid(c, k)] for c in C) > growth_eps

    used = set()
    cuts = []
    for e, (u, v, _) in enumerate(instance.edges):
        if e in used:
            continue
        C = _grow_clique(instance, (u, v), score, accept)
        edges = _clique_edges(instance, C)
        viol = sum(x[i] for i in C) - 1 - sum(y[f] for f in edges)
        if viol > eps:
            cuts.append(clique_constraint(C))
            used.update(edges)
    return cuts


def separate_tdomy(instance: Instance, point: FractionalPoint,
                   eps: float = VIOLATION_EPS) -> list[LinearConstraint]:
    cuts = []
    for i in range(instance.n):
        lhs = sum(point.y[e] for e in instance.incident_edges[i])
        if point.x[i] - lhs > eps:
            cuts.append(tdomy_constraint(instance, i))
    return cuts


def extcost_rhs(instance: Instance, i: int, k: int, x: Sequence[float],
                y: Optional[Sequence[float]] = None) -> float:
    """Right-hand side of the ``k``-th external-cost cut of ``i`` at a point (lifted if ``y`` given)."""
    order = instance.sorted_neighbors[i]
    ci = instance.cost[i]
    ck = ci[order[k - 1]]
    r = ck - ck * x[i]
    for kp in order[:k - 1]:
        d = ck - ci[kp]
        r -= d * x[kp]
        if y is not None:
            r += d * y[instance.edge_id(kp, i)]
    return r


def separate_extcost(instance: Instance, point: FractionalPoint, k_skip: int = 0,
                     eps: float = VIOLATION_EPS, lifted: bool = False) -> list[LinearConstraint]:
    """Enumerate cuts ``k > k_skip`` of every vertex; return those violated by more than ``eps``."""
    if point.q is None:
        raise ValueError("external-cost separation needs q values")
    cuts = []
    for i in range(instance.n):
        for k in range(k_skip + 1, instance.degree(i) + 1):
            r = extcost_rhs(instance, i, k, point.x, point.y if lifted else None)
            if r - point.q[i] > eps:
                cuts.append(extcost_cut(instance, i, k, lifted))
    return cuts

