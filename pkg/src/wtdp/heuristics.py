"""Constructive heuristics and local search.

* ``grasp_construct`` prunes a feasible start set (all vertices by default)
  by repeatedly removing the vertex with the best positive removal score.
  With ``cutoff >= 0`` each candidate that beats the current best is only
  adopted when a fresh draw from ``[0, 99]`` exceeds ``cutoff``.
* ``starting_heuristic`` is the deterministic special case ``cutoff = -1``.
* ``local_search`` is first-improvement over single additions, then single
  removals, scanning vertices by index.
* ``greedy_cover`` builds (or repairs) a total dominating set by scanning a
  priority order and taking every vertex that covers something new.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .graph import (Instance, ScoreState, Solution, coverage_counts, delta_add,
                    delta_remove, to_mask)
from .rng import Rng


@dataclass
class GraspConfig:
    cutoff: int = 30
    rng: Optional[Rng] = None

    def __post_init__(self):
        if not -1 <= self.cutoff <= 99:
            raise ValueError(f"cutoff must lie in [-1, 99], got {self.cutoff}")


def grasp_construct(instance: Instance, config: GraspConfig,
                    start: Optional[Iterable[int]] = None) -> Solution:
    cutoff, rng = config.cutoff, config.rng
    if rng is None and cutoff >= 0:
        raise ValueError("a randomized construction (cutoff >= 0) needs an rng")
    state = ScoreState(instance, start)
    mask = state.mask
    n = instance.n
    while True:
        best_score = 0
        best = None
        for i in range(n):
            if not mask[i] or not state.removable(i):
                continue
            s = state.get_score(i)
            if s > best_score:
                if rng is not None and rng.randbelow(100) <= cutoff:
                    continue
                best_score = s
                best = i
        if best is None:
            break
        state.remove(best)
    return Solution.from_members(instance, state.members())


def starting_heuristic(instance: Instance) -> Solution:
    return grasp_construct(instance, GraspConfig(cutoff=-1, rng=None))


def local_search(instance: Instance, solution: Solution) -> Solution:
    n = instance.n
    mask = list(solution.mask)
    cover = coverage_counts(instance, mask)
    adj = instance.adjacency
    while True:
        moved = False
        for i in range(n):
            if not mask[i] and delta_add(instance, mask, i) > 0:
                mask[i] = True
                for j in adj[i]:
                    cover[j] += 1
                moved = True
                break
        if not moved:
            for i in range(n):
                if mask[i]:
                    d = delta_remove(instance, mask, i, cover)
                    if d is not None and d > 0:
                        mask[i] = False
                        for j in adj[i]:
                            cover[j] -= 1
                        moved = True
                        break
        if not moved:
            return Solution.from_members(instance, mask)


def degree_order(instance: Instance) -> list[int]:
    return sorted(range(instance.n), key=lambda i: (-instance.degree(i), i))


def lp_order(instance: Instance, x_vals: Sequence[float]) -> list[int]:
    """Descending LP value, then descending degree, then index."""
    return sorted(range(instance.n), key=lambda i: (-x_vals[i], -instance.degree(i), i))


def greedy_cover(instance: Instance, priority_order: Sequence[int],
                 base_set: Iterable[int] = ()) -> Solution:
    n = instance.n
    adj = instance.adjacency
    mask = to_mask(n, base_set)
    covered = [False] * n
    for i in range(n):
        if mask[i]:
            for j in adj[i]:
                covered[j] = True
    missing = covered.count(False)
    for i in priority_order:
        if missing == 0:
            break
        if mask[i]:
            continue
        if any(not covered[j] for j in adj[i]):
            mask[i] = True
            for j in adj[i]:
                if not covered[j]:
                    covered[j] = True
                    missing -= 1
    return Solution.from_members(instance, mask)


def lp_guided_heuristic(instance: Instance, x_vals: Sequence[float]) -> Solution:
    """Primal heuristic driven by fractional vertex values, polished by local search."""
    return local_search(instance, greedy_cover(instance, lp_order(instance, x_vals)))
