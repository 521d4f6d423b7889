"""Genetic algorithm built on the GRASP construction.

Per generation, every unordered pair of the current population (in
population order) yields one child: GRASP pruning started from the union
of the parents, then removal-and-repair mutation, then local search.  A
child only enters the population if no member shares its
``(fitness, size)`` pair.

One ``Rng`` stream drives a run.  For each child the draws are consumed as:
GRASP acceptance draws of the crossover, the mutation strength ``m``, then
the ``m`` removal positions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .graph import Instance, Solution
from .heuristics import (GraspConfig, degree_order, grasp_construct, greedy_cover,
                         local_search)
from .rng import Rng


@dataclass(frozen=True)
class GaParams:
    initial_population_size: int = 100
    population_size: int = 40
    cutoff: int = 30
    mutation_range: tuple[int, int] = (1, 4)
    n_iterations: int = 20
    seed: int = 0

    def __post_init__(self):
        if not self.initial_population_size >= self.population_size >= 2:
            raise ValueError("need initial_population_size >= population_size >= 2")
        lo, hi = self.mutation_range
        if not 1 <= lo <= hi:
            raise ValueError(f"bad mutation range {self.mutation_range}")
        if not -1 <= self.cutoff <= 99:
            raise ValueError("cutoff must lie in [-1, 99]")
        if self.n_iterations < 0:
            raise ValueError("n_iterations must be >= 0")


@dataclass(frozen=True)
class Member:
    solution: Solution
    fitness: int
    size: int
    order: int  # insertion counter, final tie-breaker


@dataclass
class Population:
    members: list[Member] = field(default_factory=list)
    _keys: set = field(default_factory=set, repr=False)
    _counter: int = 0

    def add(self, solution: Solution) -> bool:
        """Insert unless a member with the same (fitness, size) exists."""
        key = (solution.total, solution.size)
        if key in self._keys:
            return False
        self._keys.add(key)
        self.members.append(Member(solution, key[0], key[1], self._counter))
        self._counter += 1
        return True

    def __len__(self):
        return len(self.members)

    @property
    def best(self) -> Member:
        return min(self.members, key=lambda m: (m.fitness, m.size, m.order))

    def keys(self) -> list[tuple[int, int]]:
        return [(m.fitness, m.size) for m in self.members]


def select(population: Population, k: int) -> Population:
    if k < 1:
        raise ValueError("k must be >= 1")
    seen = set()
    unique = []
    for m in population.members:
        key = (m.fitness, m.size)
        if key not in seen:
            seen.add(key)
            unique.append(m)
    unique.sort(key=lambda m: (m.fitness, m.size, m.order))
    kept = unique[:k]
    return Population(kept, {(m.fitness, m.size) for m in kept}, population._counter)


def crossover(instance: Instance, d1: Solution, d2: Solution, cutoff: int,
              rng: Optional[Rng]) -> Solution:
    union = sorted(set(d1.members) | set(d2.members))
    return grasp_construct(instance, GraspConfig(cutoff, rng), start=union)


def mutation(instance: Instance, d: Solution, mutation_range: tuple[int, int], rng: Rng,
             order: Optional[Sequence[int]] = None) -> Solution:
    m = min(rng.integers(*mutation_range), d.size)
    removed = set(rng.sample(list(d.members), m))
    survivors = [i for i in d.members if i not in removed]
    if order is None:
        order = degree_order(instance)
    return greedy_cover(instance, order, survivors)


@dataclass
class GaResult:
    best: Solution
    population: Population
    history: list[int]  # best fitness after initialisation and after each generation


def grasp_runs(instance: Instance, runs: int = 100, cutoff: int = 30, seed: int = 0) -> Solution:
    """Best of ``runs`` GRASP constructions (the GA's population initialisation on its own).

    Uses the same stream as ``run_ga`` with the same seed, so the result is
    the best member of the GA's initial population.
    """
    if runs < 1:
        raise ValueError("runs must be >= 1")
    rng = Rng(seed)
    grasp = GraspConfig(cutoff, rng)
    best = None
    for _ in range(runs):
        sol = grasp_construct(instance, grasp)
        if best is None or (sol.total, sol.size) < (best.total, best.size):
            best = sol
    return best


def run_ga(instance: Instance, params: GaParams = GaParams()) -> GaResult:
    rng = Rng(params.seed)
    order = degree_order(instance)
    grasp = GraspConfig(params.cutoff, rng)
    pop = Population()
    for _ in range(params.initial_population_size):
        pop.add(grasp_construct(instance, grasp))
    pop = select(pop, params.population_size)
    history = [pop.best.fitness]
    for _ in range(params.n_iterations):
        parents = list(pop.members)
        for a, b in itertools.combinations(parents, 2):
            child = crossover(instance, a.solution, b.solution, params.cutoff, rng)
            child = mutation(instance, child, params.mutation_range, rng, order)
            child = local_search(instance, child)
            pop.add(child)
        pop = select(pop, params.population_size)
        history.append(pop.best.fitness)
    return GaResult(pop.best.solution, pop, history)
