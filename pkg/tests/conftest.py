"""Shared fixtures and independent oracles.

The oracles here deliberately avoid the package's own evaluation code: the
objective is recomputed from the definition with plain loops, and optima
come from an itertools scan.
"""

import itertools
import random

import pytest
from hypothesis import strategies as st

from wtdp.graph import Instance, example9_instance, path_instance
from wtdp.instance_io import GenSpec, generate


def naive_objective(instance, members):
    """Definition-level objective; ``None`` if not a total dominating set."""
    D = set(members)
    nbrs = {i: set() for i in range(instance.n)}
    cost = {}
    for u, v, c in instance.edges:
        nbrs[u].add(v)
        nbrs[v].add(u)
        cost[frozenset((u, v))] = c
    if any(not (nbrs[i] & D) for i in range(instance.n)):
        return None
    total = sum(instance.vertex_weights[i] for i in D)
    total += sum(c for u, v, c in instance.edges if u in D and v in D)
    for i in range(instance.n):
        if i not in D:
            total += min(cost[frozenset((i, j))] for j in nbrs[i] & D)
    return total


def brute_force(instance):
    """(value, members) of the optimum; ties go to the lexicographically smallest member tuple."""
    best = None
    for r in range(1, instance.n + 1):
        for D in itertools.combinations(range(instance.n), r):
            w = naive_objective(instance, D)
            if w is not None and (best is None or (w, D) < best):
                best = (w, D)
    return best


def feasible_sets(instance):
    for r in range(1, instance.n + 1):
        for D in itertools.combinations(range(instance.n), r):
            if naive_objective(instance, D) is not None:
                yield D


def random_suite(count, n_lo, n_hi, ps=(0.3, 0.6, 0.9), seed=0):
    """Seeded MA-style instances with n drawn from [n_lo, n_hi]."""
    rnd = random.Random(seed)
    out = []
    for k in range(count):
        n = rnd.randint(n_lo, n_hi)
        p = ps[k % len(ps)]
        out.append(generate(GenSpec.ma(n, p, id=1, seed=rnd.randrange(2**32))))
    return out


def random_feasible_set(instance, rnd):
    """A random total dominating set: random subset, then add a neighbor for every undominated vertex."""
    D = {i for i in range(instance.n) if rnd.random() < rnd.choice((0.2, 0.5, 0.8))}
    for i in range(instance.n):
        if not any(j in D for j in instance.adjacency[i]):
            D.add(rnd.choice(instance.adjacency[i]))
    return sorted(D)


@st.composite
def instances(draw, min_n=2, max_n=8):
    """Connected-enough random graphs: a random spanning structure plus extra edges."""
    n = draw(st.integers(min_n, max_n))
    weights = draw(st.lists(st.integers(0, 9), min_size=n, max_size=n))
    pairs = {}
    # every vertex gets at least one edge to a random other vertex
    for i in range(n):
        j = draw(st.integers(0, n - 2))
        j = j if j < i else j + 1
        pairs[(min(i, j), max(i, j))] = None
    extra = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=2 * n))
    for u, v in extra:
        if u != v:
            pairs[(min(u, v), max(u, v))] = None
    edges = [(u, v, draw(st.integers(0, 9))) for (u, v) in sorted(pairs)]
    return Instance(n, tuple(weights), tuple(edges), name="hyp")


@pytest.fixture
def ex9():
    return example9_instance()


@pytest.fixture
def path4():
    return path_instance(4)


@pytest.fixture
def k2():
    return Instance(2, (1, 1), ((0, 1, 1),), name="K2")


def complete_graph(n, w=1, c=1):
    return Instance(n, (w,) * n, tuple((u, v, c) for u in range(n) for v in range(u + 1, n)),
                    name=f"K{n}")
