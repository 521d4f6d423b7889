"""Instances, feasibility and exact/incremental objective evaluation.

Vertices are ``0..n-1``.  Edges are stored once as ``(u, v, cost)`` with
``u < v`` in lexicographic order; ``Instance.cost[i][j]`` gives the cost of
the edge ``{i, j}`` from either side.  All weights are nonnegative integers,
so every objective value below is exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence


class ValidationError(ValueError):
    """Malformed instance data (self-loop, parallel edge, isolated vertex...)."""


class InfeasibleSolution(ValueError):
    """The vertex set is not a total dominating set."""


@dataclass(frozen=True)
class Instance:
    n: int
    vertex_weights: tuple[int, ...]
    edges: tuple[tuple[int, int, int], ...]
    name: str = "unnamed"
    # derived, filled in __post_init__
    adjacency: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)
    incident_edges: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)
    sorted_neighbors: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)
    cost: tuple[dict, ...] = field(init=False, repr=False, compare=False)
    edge_index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n = self.n
        if n < 1:
            raise ValidationError("instance needs at least one vertex")
        w = tuple(int(x) for x in self.vertex_weights)
        if len(w) != n:
            raise ValidationError(f"expected {n} vertex weights, got {len(w)}")
        if any(x < 0 for x in w):
            raise ValidationError("vertex weights must be nonnegative")
        norm = []
        seen = set()
        for u, v, c in self.edges:
            u, v, c = int(u), int(v), int(c)
            if u == v:
                raise ValidationError(f"self-loop at vertex {u}")
            if u > v:
                u, v = v, u
            if u < 0 or v >= n:
                raise ValidationError(f"edge ({u}, {v}) has an endpoint outside 0..{n - 1}")
            if (u, v) in seen:
                raise ValidationError(f"duplicate edge ({u}, {v})")
            if c < 0:
                raise ValidationError(f"edge ({u}, {v}) has negative cost")
            seen.add((u, v))
            norm.append((u, v, c))
        norm.sort()
        adj: list[list[int]] = [[] for _ in range(n)]
        inc: list[list[int]] = [[] for _ in range(n)]
        cost: list[dict] = [{} for _ in range(n)]
        for e, (u, v, c) in enumerate(norm):
            adj[u].append(v)
            adj[v].append(u)
            inc[u].append(e)
            inc[v].append(e)
            cost[u][v] = c
            cost[v][u] = c
        isolated = [i for i in range(n) if not adj[i]]
        if isolated:
            raise ValidationError(f"isolated vertices {isolated}: total domination is infeasible")
        s = object.__setattr__
        s(self, "vertex_weights", w)
        s(self, "edges", tuple(norm))
        s(self, "adjacency", tuple(tuple(sorted(a)) for a in adj))
        s(self, "incident_edges", tuple(tuple(x) for x in inc))
        s(self, "sorted_neighbors",
          tuple(tuple(sorted(adj[i], key=lambda j, i=i: (cost[i][j], j))) for i in range(n)))
        s(self, "cost", tuple(cost))
        s(self, "edge_index", {(u, v): e for e, (u, v, _) in enumerate(norm)})

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, i: int) -> int:
        return len(self.adjacency[i])

    @property
    def max_degree(self) -> int:
        return max(len(a) for a in self.adjacency)

    @property
    def max_edge_cost(self) -> int:
        return max((c for _, _, c in self.edges), default=0)

    def edge_id(self, i: int, j: int) -> int:
        return self.edge_index[(i, j) if i < j else (j, i)]


@dataclass(frozen=True)
class ObjectiveBreakdown:
    vertex_cost: int
    internal_cost: int
    external_cost: int

    @property
    def total(self) -> int:
        return self.vertex_cost + self.internal_cost + self.external_cost

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.vertex_cost, self.internal_cost, self.external_cost, self.total)


@dataclass(frozen=True)
class Solution:
    """A vertex subset with its objective breakdown (``None`` if infeasible)."""

    members: tuple[int, ...]
    mask: tuple[bool, ...]
    breakdown: Optional[ObjectiveBreakdown]

    @classmethod
    def from_members(cls, instance: Instance, members: Iterable[int]) -> "Solution":
        mask = to_mask(instance.n, members)
        ms = tuple(i for i in range(instance.n) if mask[i])
        try:
            bd = evaluate(instance, mask)
        except InfeasibleSolution:
            bd = None
        return cls(ms, tuple(mask), bd)

    @property
    def feasible(self) -> bool:
        return self.breakdown is not None

    @property
    def total(self) -> int:
        if self.breakdown is None:
            raise InfeasibleSolution(f"{self.members} is not a total dominating set")
        return self.breakdown.total

    @property
    def size(self) -> int:
        return len(self.members)


def to_mask(n: int, members: Iterable[int]) -> list[bool]:
    """Boolean membership vector; accepts either an index list or a mask."""
    members = list(members)
    if len(members) == n and all(isinstance(x, bool) for x in members):
        return list(members)
    mask = [False] * n
    for i in members:
        if not 0 <= i < n:
            raise ValueError(f"vertex {i} outside 0..{n - 1}")
        mask[i] = True
    return mask


def is_total_dominating(instance: Instance, members: Iterable[int]) -> bool:
    mask = to_mask(instance.n, members)
    return all(any(mask[j] for j in nb) for nb in instance.adjacency)


def external_cost(instance: Instance, mask: Sequence[bool], i: int) -> Optional[int]:
    """Cheapest edge from ``i`` into the set, ``None`` if ``i`` has no neighbor in it."""
    ci = instance.cost[i]
    best = None
    for j in instance.adjacency[i]:
        if mask[j]:
            c = ci[j]
            if best is None or c < best:
                best = c
    return best


def evaluate(instance: Instance, members: Iterable[int]) -> ObjectiveBreakdown:
    mask = to_mask(instance.n, members)
    if not is_total_dominating(instance, mask):
        raise InfeasibleSolution("vertex set is not a total dominating set")
    vc = sum(w for w, m in zip(instance.vertex_weights, mask) if m)
    ic = sum(c for u, v, c in instance.edges if mask[u] and mask[v])
    ec = 0
    for i in range(instance.n):
        if not mask[i]:
            ec += external_cost(instance, mask, i)
    return ObjectiveBreakdown(vc, ic, ec)


def coverage_counts(instance: Instance, mask: Sequence[bool]) -> list[int]:
    """``|N(j) ∩ D|`` for every vertex ``j``."""
    return [sum(1 for k in nb if mask[k]) for nb in instance.adjacency]


def delta_remove(instance: Instance, mask: Sequence[bool], i: int,
                 coverage: Optional[Sequence[int]] = None) -> Optional[int]:
    """Objective improvement of removing ``i`` from the set.

    Returns ``None`` when the removal would leave some neighbor of ``i``
    without a dominator.  Positive values are improvements.
    """
    adj = instance.adjacency
    ci = instance.cost[i]
    for j in adj[i]:
        cnt = coverage[j] if coverage is not None else sum(1 for k in adj[j] if mask[k])
        if cnt <= 1:
            return None
    gain = instance.vertex_weights[i]
    new_ext_i = None
    for j in adj[i]:
        if mask[j]:
            c = ci[j]
            gain += c
            if new_ext_i is None or c < new_ext_i:
                new_ext_i = c
    gain -= new_ext_i
    for j in adj[i]:
        if mask[j]:
            continue
        # j is outside: its cheapest dominator may have been i
        cj = instance.cost[j]
        old = new = None
        for k in adj[j]:
            if not mask[k]:
                continue
            c = cj[k]
            if old is None or c < old:
                old = c
            if k != i and (new is None or c < new):
                new = c
        gain -= new - old
    return gain


def delta_add(instance: Instance, mask: Sequence[bool], i: int) -> int:
    """Objective improvement of adding ``i`` (``mask`` must be feasible)."""
    adj = instance.adjacency
    ci = instance.cost[i]
    gain = external_cost(instance, mask, i) - instance.vertex_weights[i]
    for j in adj[i]:
        if mask[j]:
            gain -= ci[j]
        else:
            old = external_cost(instance, mask, j)
            if ci[j] < old:
                gain += old - ci[j]
    return gain


class ScoreState:
    """Removal scores and coverage counters for the greedy pruning heuristic.

    ``score[i]`` caches ``delta_remove`` for member ``i`` (``None`` = stale).
    """

    def __init__(self, instance: Instance, members: Optional[Iterable[int]] = None):
        self.instance = instance
        if members is None:
            self.mask = [True] * instance.n
        else:
            self.mask = to_mask(instance.n, members)
        self.coverage_count = coverage_counts(instance, self.mask)
        self.score: list[Optional[int]] = [None] * instance.n

    def members(self) -> list[int]:
        return [i for i in range(self.instance.n) if self.mask[i]]

    def removable(self, i: int) -> bool:
        cc = self.coverage_count
        return all(cc[j] > 1 for j in self.instance.adjacency[i])

    def get_score(self, i: int) -> Optional[int]:
        s = self.score[i]
        if s is None:
            s = delta_remove(self.instance, self.mask, i, self.coverage_count)
            self.score[i] = s
        return s

    def remove(self, i: int) -> None:
        self.mask[i] = False
        maintain_scores(self, i)

    def is_total_dominating(self) -> bool:
        return all(c >= 1 for c in self.coverage_count)


def maintain_scores(state: ScoreState, removed_vertex: int) -> set[int]:
    """Update counters after ``removed_vertex`` left the set; returns invalidated vertices.

    Invalidates the two-hop neighborhood ``N(N(r))`` and ``N(r)`` itself: a
    direct neighbor loses an internal edge to ``r`` and gains ``r`` as an
    outside vertex it may cover, so its cached score is stale too.
    """
    adj = state.instance.adjacency
    touched = set()
    for j in adj[removed_vertex]:
        state.coverage_count[j] -= 1
        touched.add(j)
        touched.update(adj[j])
    for v in touched:
        state.score[v] = None
    return touched


# --- reference instances ---------------------------------------------------

FIG1_LABELS = "ABCDEFGHI"


def example9_instance() -> Instance:
    """The 9-vertex grid instance whose optimum is {C, D, F, G} with weight 38."""
    w = [1, 8, 1, 5, 1, 7, 1, 9, 1]
    named = [("A", "B", 6), ("B", "C", 7), ("A", "D", 2), ("D", "E", 5), ("B", "E", 3),
             ("C", "F", 3), ("E", "F", 3), ("D", "G", 3), ("G", "H", 2), ("E", "H", 6),
             ("H", "I", 2), ("F", "I", 4)]
    idx = {ch: k for k, ch in enumerate(FIG1_LABELS)}
    return Instance(9, tuple(w), tuple((idx[a], idx[b], c) for a, b, c in named), name="example9")


def example9_vertices(labels: str) -> list[int]:
    return [FIG1_LABELS.index(ch) for ch in labels]


def path_instance(n: int = 4, weight: int = 1, cost: int = 1) -> Instance:
    return Instance(n, (weight,) * n, tuple((i, i + 1, cost) for i in range(n - 1)),
                    name=f"path{n}")
