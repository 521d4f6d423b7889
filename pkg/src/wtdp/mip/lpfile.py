"""LP-file export/import, branching-priority sidecars and assignment files.

The writer emits the common CPLEX-style LP dialect.  Header comments
(``\\ key value``) carry the formulation tag, options and big-M/L constants
so that ``read_model`` restores an equal ``MipModel``.  The reader only
accepts what ``write_model`` produces.
"""

from __future__ import annotations

from decimal import Decimal
from fractions import Fraction
from pathlib import Path
from typing import Mapping, Union

from .model import (BINARY, CONTINUOUS, INTEGER, LinearConstraint, MipModel, ModelOptions,
                    Number, Variable, tag_from_name)

PathLike = Union[str, Path]
TERMS_PER_LINE = 8


class LpFormatError(ValueError):
    pass


def fmt_number(c: Number) -> str:
    if isinstance(c, Fraction):
        if c.denominator == 1:
            return str(c.numerator)
        d = c.denominator
        while d % 2 == 0:
            d //= 2
        while d % 5 == 0:
            d //= 5
        if d == 1:
            return format(Decimal(c.numerator) / Decimal(c.denominator), "f")
        return repr(float(c))
    if isinstance(c, float):
        if c.is_integer():
            return str(int(c))
        return repr(c)
    return str(c)


def parse_number(tok: str) -> Number:
    f = Fraction(tok)
    return f.numerator if f.denominator == 1 else f


def _expr(terms) -> list[str]:
    toks = []
    for name, c in terms:
        sign = "-" if c < 0 else "+"
        toks.append(f"{sign} {fmt_number(abs(c))} {name}")
    lines = []
    for k in range(0, len(toks), TERMS_PER_LINE):
        lines.append(" ".join(toks[k:k + TERMS_PER_LINE]))
    return lines or ["+ 0 x_0"]


def model_to_text(model: MipModel) -> str:
    o = model.options
    out = [
        "\\ wtdp-model 1",
        f"\\ formulation {model.formulation}",
        f"\\ options lifted={int(o.lifted)} tdomy={int(o.tdomy)} clique_cover={int(o.clique_cover)}"
        f" extk={o.extcost_init_k if o.extcost_init_k is not None else '-'} verbatim={int(o.verbatim)}",
        f"\\ bigM {model.big_M}",
        f"\\ bigL {model.big_L}",
        "Minimize",
    ]
    obj = [(v.name, v.obj) for v in model.variables if v.obj != 0]
    lines = _expr(obj)
    out.append(f" obj: {lines[0]}")
    out += [f"   {ln}" for ln in lines[1:]]
    out.append("Subject To")
    for c in model.constraints:
        lines = _expr(c.terms)
        lines[-1] += f" {c.sense} {fmt_number(c.rhs)}"
        out.append(f" {c.name}: {lines[0]}")
        out += [f"   {ln}" for ln in lines[1:]]
    out.append("Bounds")
    for v in model.variables:
        if v.kind == BINARY:
            continue
        up = "+inf" if v.upper is None else fmt_number(v.upper)
        out.append(f" {fmt_number(v.lower)} <= {v.name} <= {up}")
    for section, kind in (("Binaries", BINARY), ("Generals", INTEGER)):
        names = [v.name for v in model.variables if v.kind == kind]
        if names:
            out.append(section)
            for k in range(0, len(names), 10):
                out.append(" " + " ".join(names[k:k + 10]))
    out.append("End")
    return "\n".join(out) + "\n"


def write_model(model: MipModel, path: PathLike) -> None:
    Path(path).write_text(model_to_text(model), encoding="utf-8")


def priorities_to_text(model: MipModel) -> str:
    return "".join(f"{v.name} {model.priorities[v.name]}\n"
                   for v in model.variables if model.priorities.get(v.name, 0))


def write_priorities(model: MipModel, path: PathLike) -> None:
    Path(path).write_text(priorities_to_text(model), encoding="utf-8")


def _parse_expr(tokens: list[str], lineno: int) -> tuple[list[tuple[str, Number]], list[str]]:
    """Consume ``(+|-) coef name`` triples until a sense token; return terms and the rest."""
    terms = []
    k = 0
    while k < len(tokens) and tokens[k] not in ("<=", ">=", "="):
        if k + 3 > len(tokens):
            raise LpFormatError(f"line {lineno}: malformed expression near {tokens[k]!r}")
        sign, coef, name = tokens[k:k + 3]
        if sign not in ("+", "-"):
            raise LpFormatError(f"line {lineno}: expected sign, got {sign!r}")
        try:
            c = parse_number(coef)
        except (ValueError, ZeroDivisionError):
            raise LpFormatError(f"line {lineno}: bad coefficient {coef!r}") from None
        terms.append((name, -c if sign == "-" else c))
        k += 3
    return terms, tokens[k:]


def model_from_text(text: str) -> MipModel:
    meta = {}
    section = None
    obj_tokens: list[str] = []
    cons_chunks: list[tuple[int, str, list[str]]] = []
    bounds: dict[str, tuple[Number, Number | None]] = {}
    kinds: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("\\"):
            parts = line[1:].split(None, 1)
            if len(parts) == 2:
                meta[parts[0]] = parts[1]
            continue
        low = line.lower()
        if low in ("minimize", "subject to", "bounds", "binaries", "generals", "end"):
            section = low
            continue
        toks = line.split()
        if section == "minimize":
            obj_tokens += toks[1:] if toks[0] == "obj:" else toks
        elif section == "subject to":
            if toks[0].endswith(":"):
                cons_chunks.append((lineno, toks[0][:-1], toks[1:]))
            elif cons_chunks:
                cons_chunks[-1][2].extend(toks)
            else:
                raise LpFormatError(f"line {lineno}: constraint without a name")
        elif section == "bounds":
            if len(toks) != 5 or toks[1] != "<=" or toks[3] != "<=":
                raise LpFormatError(f"line {lineno}: expected 'lo <= name <= hi'")
            up = None if toks[4] == "+inf" else parse_number(toks[4])
            bounds[toks[2]] = (parse_number(toks[0]), up)
        elif section == "binaries":
            kinds.update({t: BINARY for t in toks})
        elif section == "generals":
            kinds.update({t: INTEGER for t in toks})
        else:
            raise LpFormatError(f"line {lineno}: content outside any section")
    if "formulation" not in meta:
        raise LpFormatError("missing '\\ formulation' header")
    obj_terms, rest = _parse_expr(obj_tokens, 0)
    if rest:
        raise LpFormatError("objective contains a sense")
    objective = dict(obj_terms)
    constraints = []
    order: list[str] = []
    seen = set()

    def note(name):
        if name not in seen:
            seen.add(name)
            order.append(name)

    for name, _ in obj_terms:
        note(name)
    for lineno, name, toks in cons_chunks:
        terms, rest = _parse_expr(toks, lineno)
        if len(rest) != 2:
            raise LpFormatError(f"line {lineno}: expected '<sense> <rhs>' after terms")
        constraints.append(LinearConstraint(tuple(terms), rest[0], parse_number(rest[1]),
                                            tag_from_name(name), name))
        for v, _ in terms:
            note(v)
    for name in list(bounds) + list(kinds):
        note(name)
    # restore canonical x, y, z, q order
    rank = {"x": 0, "y": 1, "z": 2, "q": 3}

    def key(name):
        head, *idx = name.split("_")
        return (rank.get(head, 9), [int(t) for t in idx])

    variables = []
    for name in sorted(order, key=key):
        kind = kinds.get(name, CONTINUOUS)
        if kind == BINARY:
            lo, up = 0, 1
        else:
            lo, up = bounds.get(name, (0, None))
        variables.append(Variable(name, kind, lo, up, objective.get(name, 0)))
    opts = {}
    for item in meta.get("options", "").split():
        k, v = item.split("=")
        opts[k] = v
    options = ModelOptions(
        lifted=opts.get("lifted") == "1", tdomy=opts.get("tdomy") == "1",
        clique_cover=opts.get("clique_cover") == "1",
        extcost_init_k=None if opts.get("extk", "-") == "-" else int(opts["extk"]),
        verbatim=opts.get("verbatim") == "1")
    M = int(meta.get("bigM", 0))
    L = int(meta.get("bigL", 0))
    pr = {v.name: 0 for v in variables}
    model = MipModel(meta["formulation"], variables, constraints, M, L, pr, options)
    return model


def read_model(path: PathLike) -> MipModel:
    model = model_from_text(Path(path).read_text(encoding="utf-8"))
    prio = Path(path).with_suffix(".prio")
    if prio.exists():
        model.priorities.update(read_priorities(prio))
    return model


def read_priorities(path: PathLike) -> dict[str, int]:
    out = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            name, val = line.split()
            out[name] = int(val)
    return out


def parse_assignment(text: str) -> dict[str, Number]:
    vals: dict[str, Number] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if len(toks) != 2:
            raise LpFormatError(f"line {lineno}: expected '<varname> <value>'")
        try:
            vals[toks[0]] = parse_number(toks[1])
        except (ValueError, ZeroDivisionError):
            raise LpFormatError(f"line {lineno}: bad value {toks[1]!r}") from None
    return vals


def read_assignment(path: PathLike) -> dict[str, Number]:
    return parse_assignment(Path(path).read_text(encoding="utf-8"))


def assignment_to_text(values: Mapping[str, Number]) -> str:
    return "".join(f"{k} {fmt_number(v)}\n" for k, v in values.items())
