"""Exact solvers: exhaustive enumeration and a combinatorial branch-and-bound."""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional

import numpy as np

from .graph import Instance, Solution
from .heuristics import local_search, starting_heuristic

OPTIMAL = "Optimal"
TIME_LIMIT = "TimeLimit"


class TooLarge(ValueError):
    pass


@dataclass(frozen=True)
class ExactResult:
    best: Solution
    lower_bound: int
    nodes_explored: int
    status: str

    @property
    def optimality_gap_pct(self) -> Fraction:
        return optimality_gap(self.best.total, self.lower_bound)


def optimality_gap(w_best: int, lower_bound) -> Fraction:
    if w_best == 0:
        raise ZeroDivisionError("best objective is zero")
    return Fraction(100) * (Fraction(w_best) - Fraction(lower_bound)) / Fraction(w_best)


def enumerate_optimal(instance: Instance, limit_n: int = 25, chunk_bits: int = 16) -> ExactResult:
    """Scan all ``2**n`` subsets; ties go to the lexicographically smallest member list."""
    n = instance.n
    if n > limit_n:
        raise TooLarge(f"n={n} exceeds enumeration limit {limit_n}")
    w = np.array(instance.vertex_weights, dtype=np.int64)
    eu = np.array([u for u, _, _ in instance.edges], dtype=np.int64)
    ev = np.array([v for _, v, _ in instance.edges], dtype=np.int64)
    ec = np.array([c for _, _, c in instance.edges], dtype=np.int64)
    big = np.int64(np.iinfo(np.int64).max // 4)
    nbr = [np.array(instance.adjacency[i], dtype=np.int64) for i in range(n)]
    nbc = [np.array([instance.cost[i][j] for j in instance.adjacency[i]], dtype=np.int64)
           for i in range(n)]
    bits = np.arange(n, dtype=np.int64)
    total_masks = 1 << n
    step = 1 << min(chunk_bits, n)
    best_val = None
    best_members = None
    for start in range(0, total_masks, step):
        codes = np.arange(start, min(start + step, total_masks), dtype=np.int64)
        X = ((codes[:, None] >> bits[None, :]) & 1).astype(bool)
        feas = np.ones(len(codes), dtype=bool)
        ext = np.zeros(len(codes), dtype=np.int64)
        for i in range(n):
            sub = X[:, nbr[i]]
            feas &= sub.any(axis=1)
            cheapest = np.where(sub, nbc[i][None, :], big).min(axis=1)
            ext += np.where(X[:, i], 0, cheapest)
        if not feas.any():
            continue
        vals = X.astype(np.int64) @ w + (X[:, eu] & X[:, ev]).astype(np.int64) @ ec + ext
        vals = np.where(feas, vals, big)
        v = int(vals.min())
        if best_val is not None and v > best_val:
            continue
        cands = [tuple(np.flatnonzero(X[r]).tolist()) for r in np.flatnonzero(vals == v)]
        cand = min(cands)
        if best_val is None or v < best_val or cand < best_members:
            best_val, best_members = v, cand
    sol = Solution.from_members(instance, best_members)
    return ExactResult(sol, sol.total, total_masks, OPTIMAL)


_FREE, _IN, _OUT = 0, 1, 2


class _Timeout(Exception):
    pass


def node_bound(instance: Instance, fixed_in: Iterable[int], fixed_out: Iterable[int]) -> float:
    """Lower bound on every completion of a partial assignment (``inf`` if none is feasible)."""
    fin, fout = set(fixed_in), set(fixed_out)
    total = sum(instance.vertex_weights[i] for i in fin)
    total += sum(c for u, v, c in instance.edges if u in fin and v in fin)
    for i in fout:
        total += min((instance.cost[i][j] for j in instance.adjacency[i] if j not in fout),
                     default=float("inf"))
    return total


def branch_and_bound(instance: Instance, time_limit: Optional[float] = None,
                     prune: bool = True, trace: Optional[Callable] = None) -> ExactResult:
    """Depth-first search over vertex membership, highest degree first, "in" branch first.

    Node bound: vertex and internal-edge costs of the vertices fixed in, plus
    for every vertex fixed out its cheapest edge to a vertex not fixed out.
    A node is infeasible once some vertex has every neighbor fixed out.
    ``prune=False`` disables both cut-offs (used to measure pruning).
    ``trace(fixed_in, fixed_out, bound)`` is called at every node when given.
    """
    n = instance.n
    adj = instance.adjacency
    cost = instance.cost
    w = instance.vertex_weights
    order = sorted(range(n), key=lambda i: (-instance.degree(i), i))
    inf = float("inf")

    status = [_FREE] * n
    alive = [len(a) for a in adj]  # neighbors not fixed out
    dead = [0]  # vertices with alive == 0
    minc = [0] * n  # for fixed-out vertices: cheapest edge to a non-out neighbor

    inc = local_search(instance, starting_heuristic(instance))
    best = [inc.total, list(inc.members)]
    nodes = 0
    pending: list = []  # parent bounds of unexplored "out" siblings
    t0 = time.perf_counter()

    def recompute_min(v):
        cv = cost[v]
        return min((cv[j] for j in adj[v] if status[j] != _OUT), default=inf)

    def visit(depth, in_cost, out_cost):
        nonlocal nodes
        nodes += 1
        if time_limit is not None and (nodes & 1023) == 0 and time.perf_counter() - t0 > time_limit:
            raise _Timeout(min([best[0], in_cost + out_cost] + pending))
        bound = in_cost + out_cost
        if trace is not None:
            trace([i for i in range(n) if status[i] == _IN],
                  [i for i in range(n) if status[i] == _OUT], bound)
        if prune and bound >= best[0]:
            return
        if depth == n:
            if dead[0] == 0 and bound < best[0]:
                best[0] = bound
                best[1] = [i for i in range(n) if status[i] == _IN]
            return
        u = order[depth]
        # branch u in
        status[u] = _IN
        add = w[u] + sum(cost[u][j] for j in adj[u] if status[j] == _IN)
        pending.append(bound)
        try:
            visit(depth + 1, in_cost + add, out_cost)
        finally:
            pending.pop()
        # branch u out
        status[u] = _OUT
        saved = []
        feasible = True
        extra = 0
        for j in adj[u]:
            alive[j] -= 1
            if alive[j] == 0:
                dead[0] += 1
                feasible = False
            if status[j] == _OUT and cost[j][u] == minc[j]:
                new = recompute_min(j)
                saved.append((j, minc[j]))
                extra += new - minc[j]
                minc[j] = new
        mu = recompute_min(u)
        saved.append((u, minc[u]))
        minc[u] = mu
        extra += mu
        if feasible or not prune:
            visit(depth + 1, in_cost, out_cost + extra)
        for j, old in reversed(saved):
            minc[j] = old
        for j in adj[u]:
            if alive[j] == 0:
                dead[0] -= 1
            alive[j] += 1
        status[u] = _FREE

    try:
        visit(0, 0, 0)
    except _Timeout as exc:
        lb = exc.args[0]
        sol = Solution.from_members(instance, best[1])
        return ExactResult(sol, int(lb) if lb != inf else sol.total, nodes, TIME_LIMIT)
    sol = Solution.from_members(instance, best[1])
    return ExactResult(sol, sol.total, nodes, OPTIMAL)
