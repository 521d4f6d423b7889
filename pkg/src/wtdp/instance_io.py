"""Native instance file format and Erdos-Renyi instance generators.

File layout (UTF-8, ``#`` starts a comment line)::

    wtdp 1
    name MA-20-0.2-1
    rng xoshiro256ss-splitmix64 12345      # generated files only
    20 31
    v 0 3                                   # n lines, index order
    e 0 5 2                                 # m lines, u < v, lexicographic

Generation draws, in this order, from ``Rng(seed)``: one ``random() < p``
test per vertex pair ``(u, v)``, ``u < v``, lexicographically; then one
vertex weight per vertex; then one cost per kept edge in edge order.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

from .graph import Instance, ValidationError
from .rng import ALGORITHM_ID, Rng

MAGIC = "wtdp"
VERSION = 1
MAX_REDRAWS = 1000

# (vertex weight range, edge cost range) keyed by the edge cost upper bound c_u
NEW_RANGES = {
    50: ((1, 10), (1, 50)),
    25: ((1, 25), (1, 25)),
    10: ((1, 50), (1, 10)),
}


class ParseError(ValueError):
    def __init__(self, lineno: int, msg: str):
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


class GenerationFailed(RuntimeError):
    pass


@dataclass(frozen=True)
class GenSpec:
    n: int
    p: float
    vertex_weight_range: tuple[int, int] = (1, 5)
    edge_weight_range: tuple[int, int] = (1, 5)
    seed: int = 0
    family: str = "MA"
    id: int = 1

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"edge probability {self.p} outside [0, 1]")
        for lo, hi in (self.vertex_weight_range, self.edge_weight_range):
            if lo < 1 or hi < lo:
                raise ValueError(f"bad weight range [{lo}, {hi}]")
        if self.id < 1:
            raise ValueError("replicate id must be >= 1")
        if self.family not in ("MA", "NEW"):
            raise ValueError(f"unknown family {self.family!r}")
        if self.n < 2:
            raise ValueError("need at least two vertices")

    @classmethod
    def ma(cls, n: int, p: float, id: int = 1, seed: int = 0) -> "GenSpec":
        return cls(n, p, (1, 5), (1, 5), seed, "MA", id)

    @classmethod
    def new(cls, n: int, p: float, c_u: int, id: int = 1, seed: int = 0) -> "GenSpec":
        if c_u not in NEW_RANGES:
            raise ValueError(f"c_u must be one of {sorted(NEW_RANGES)}")
        wr, cr = NEW_RANGES[c_u]
        return cls(n, p, wr, cr, seed, "NEW", id)

    def base_name(self) -> str:
        if self.family == "MA":
            return f"MA-{self.n}-{self.p:g}-{self.id}"
        return f"NEW-{self.n}-{self.p:g}-{self.edge_weight_range[1]}-{self.id}"


@dataclass(frozen=True)
class Generated:
    instance: Instance
    seed_used: int
    redraws: int


def _draw(spec: GenSpec, seed: int):
    rng = Rng(seed)
    n, p = spec.n, spec.p
    pairs = []
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                pairs.append((u, v))
    w = [rng.integers(*spec.vertex_weight_range) for _ in range(n)]
    edges = [(u, v, rng.integers(*spec.edge_weight_range)) for u, v in pairs]
    return w, edges


def generate_full(spec: GenSpec) -> Generated:
    seed = spec.seed
    for attempt in range(MAX_REDRAWS):
        s = (seed + attempt) & ((1 << 64) - 1)
        w, edges = _draw(spec, s)
        deg = [0] * spec.n
        for u, v, _ in edges:
            deg[u] += 1
            deg[v] += 1
        if min(deg) == 0:
            continue
        name = spec.base_name() if attempt == 0 else f"{spec.base_name()}+r{attempt}"
        return Generated(Instance(spec.n, tuple(w), tuple(edges), name=name), s, attempt)
    raise GenerationFailed(
        f"{spec.base_name()}: every one of {MAX_REDRAWS} draws had an isolated vertex")


def generate(spec: GenSpec) -> Instance:
    return generate_full(spec).instance


def serialize(instance: Instance, rng_seed: Optional[int] = None) -> str:
    lines = [f"{MAGIC} {VERSION}", f"name {instance.name}"]
    if rng_seed is not None:
        lines.append(f"rng {ALGORITHM_ID} {rng_seed}")
    lines.append(f"{instance.n} {instance.m}")
    lines += [f"v {i} {w}" for i, w in enumerate(instance.vertex_weights)]
    lines += [f"e {u} {v} {c}" for u, v, c in instance.edges]
    return "\n".join(lines) + "\n"


def parse(text: str) -> Instance:
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        rows.append((lineno, line))
    if not rows:
        raise ParseError(1, "empty input")
    it = iter(rows)

    def nxt(what):
        try:
            return next(it)
        except StopIteration:
            last = rows[-1][0]
            raise ParseError(last + 1, f"unexpected end of input, expected {what}") from None

    def ints(lineno, toks, count, what):
        if len(toks) != count:
            raise ParseError(lineno, f"expected {what}")
        try:
            return [int(t) for t in toks]
        except ValueError:
            raise ParseError(lineno, f"non-integer field in {what}") from None

    lineno, line = nxt("header")
    if line.split() != [MAGIC, str(VERSION)]:
        raise ParseError(lineno, f"expected header '{MAGIC} {VERSION}'")
    lineno, line = nxt("name line")
    if not line.startswith("name ") or not line[5:].strip():
        raise ParseError(lineno, "expected 'name <string>'")
    name = line[5:].strip()
    lineno, line = nxt("size line")
    if line.startswith("rng "):
        toks = line.split()
        if len(toks) != 3:
            raise ParseError(lineno, "expected 'rng <algorithm-id> <seed>'")
        lineno, line = nxt("size line")
    n, m = ints(lineno, line.split(), 2, "'n m'")
    if n < 1 or m < 0:
        raise ParseError(lineno, "n must be >= 1 and m >= 0")
    weights = []
    for k in range(n):
        lineno, line = nxt(f"vertex line {k}")
        toks = line.split()
        if not toks or toks[0] != "v":
            raise ParseError(lineno, "expected 'v <index> <weight>'")
        idx, w = ints(lineno, toks[1:], 2, "'v <index> <weight>'")
        if idx != k:
            raise ParseError(lineno, f"vertex index {idx} out of order, expected {k}")
        weights.append(w)
    edges = []
    for _ in range(m):
        lineno, line = nxt("edge line")
        toks = line.split()
        if not toks or toks[0] != "e":
            raise ParseError(lineno, "expected 'e <u> <v> <cost>'")
        edges.append(tuple(ints(lineno, toks[1:], 3, "'e <u> <v> <cost>'")))
    extra = next(it, None)
    if extra is not None:
        raise ParseError(extra[0], "trailing content after edge list")
    if any(w < 0 for w in weights):
        raise ValidationError("negative vertex weight")
    return Instance(n, tuple(weights), tuple(edges), name=name)


def read_instance(path: Union[str, Path]) -> Instance:
    return parse(Path(path).read_text(encoding="utf-8"))


def write_instance(instance: Instance, path: Union[str, Path], rng_seed: Optional[int] = None) -> None:
    Path(path).write_text(serialize(instance, rng_seed), encoding="utf-8")
