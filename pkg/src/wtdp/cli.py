"""``wtd`` command-line interface.

Value output (objectives, member sets, bounds, CSV rows) goes to stdout and
is deterministic for a fixed seed; timings and progress go to stderr.

Exit codes: 0 success, 1 usage error, 2 solver or I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from .exact import TooLarge, branch_and_bound, enumerate_optimal
from .genetic import GaParams, grasp_runs, run_ga
from .graph import InfeasibleSolution, Solution, ValidationError, evaluate
from .heuristics import local_search, starting_heuristic
from .instance_io import GenerationFailed, GenSpec, ParseError, generate_full, read_instance, serialize
from .lp import CUT_FAMILIES, NumericalFailure, gap_pct, root_cut_loop
from .mip import (InvalidOptions, LpFormatError, ModelOptions, build_model, read_assignment,
                  read_model, verify_assignment, write_model, write_priorities)

DEFAULT_TIMELIMIT = 1800.0
CSV_HEADER = ["instance", "solver", "seed", "runtime_ms", "w_B", "LB", "opt_gap",
              "primal_gap", "nodes", "status"]
SOLVERS = ("heur", "grasp", "ga", "bnb", "enum")
RANDOMIZED = ("grasp", "ga")
EXACT = ("bnb", "enum")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


# --- gap arithmetic ----------------------------------------------------------

def compute_gaps(w_B, LB, w_H, w_MIP) -> tuple[Optional[Fraction], Optional[Fraction]]:
    """(optimality gap, primal gap) in percent as exact rationals; ``None`` where inputs are missing."""
    opt = prim = None
    if w_B is not None and LB is not None:
        if w_B == 0:
            raise ZeroDivisionError("w_B is zero")
        opt = Fraction(100) * (Fraction(w_B) - Fraction(LB)) / Fraction(w_B)
    if w_H is not None and w_MIP is not None:
        if w_MIP == 0:
            raise ZeroDivisionError("w_MIP is zero")
        prim = Fraction(100) * (Fraction(w_H) - Fraction(w_MIP)) / Fraction(w_MIP)
    return opt, prim


def fmt_pct(value: Optional[Fraction]) -> str:
    """Two decimals, halves rounded away from zero; empty for ``None``."""
    if value is None:
        return ""
    v = Fraction(value)
    sign = "-" if v < 0 else ""
    cents = math.floor(abs(v) * 100 + Fraction(1, 2))
    return f"{sign}{cents // 100}.{cents % 100:02d}"


# --- output helpers ----------------------------------------------------------

def _members(sol: Solution) -> str:
    return ",".join(str(i) for i in sol.members)


def _print_solution(sol: Solution, head: str) -> None:
    vc, ic, ec, _ = sol.breakdown.as_tuple()
    print(head)
    print(f"members={_members(sol)}")
    print(f"breakdown={vc},{ic},{ec}")


def _timed(label: str, t0: float) -> None:
    print(f"[{label}] {1000 * (time.perf_counter() - t0):.1f} ms", file=sys.stderr)


def _parse_ints(text: str, what: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"{what} must be comma-separated integers, got {text!r}") from None


def _model_options(instance, static_cuts: str = "", lifted: bool = False,
                   extk: Optional[str] = None, verbatim: bool = False) -> ModelOptions:
    cuts = {c.strip().lower() for c in static_cuts.split(",") if c.strip()}
    bad = cuts - {"tdomy", "clique"}
    if bad:
        raise UsageError(f"unknown static cuts {sorted(bad)} (choose from tdomy, clique)")
    k = None
    if extk == "all":
        k = max(1, instance.max_degree)  # every external-cost cut up front
    elif extk is not None:
        vals = _parse_ints(extk, "--extk")
        if len(vals) != 1:
            raise UsageError("--extk takes one integer or 'all'")
        k = vals[0]
    return ModelOptions(lifted=lifted, tdomy="tdomy" in cuts, clique_cover="clique" in cuts,
                        extcost_init_k=k, verbatim=verbatim)


# --- subcommands -------------------------------------------------------------

def cmd_gen(args) -> int:
    if args.family == "ma":
        spec = GenSpec.ma(args.n, args.p, args.id, seed=args.seed)
    else:
        if args.cu is None:
            raise UsageError("--cu is required for --family new")
        spec = GenSpec.new(args.n, args.p, args.cu, args.id, seed=args.seed)
    gen = generate_full(spec)
    text = serialize(gen.instance, rng_seed=gen.seed_used)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
        print(f"{gen.instance.name} n={gen.instance.n} m={gen.instance.m} "
              f"seed={gen.seed_used} redraws={gen.redraws}")
    else:
        sys.stdout.write(text)
    return 0


def cmd_eval(args) -> int:
    inst = read_instance(args.instance)
    members = _parse_ints(args.set, "--set")
    for i in members:
        if not 0 <= i < inst.n:
            raise UsageError(f"vertex {i} out of range 0..{inst.n - 1}")
    bd = evaluate(inst, members)
    print(f"w={bd.total} breakdown={bd.vertex_cost},{bd.internal_cost},{bd.external_cost}")
    return 0


def cmd_heur(args) -> int:
    inst = read_instance(args.instance)
    t0 = time.perf_counter()
    sol = starting_heuristic(inst)
    if not args.no_ls:
        sol = local_search(inst, sol)
    _timed("heur", t0)
    _print_solution(sol, f"w={sol.total} status=Feasible")
    return 0


def cmd_grasp(args) -> int:
    inst = read_instance(args.instance)
    t0 = time.perf_counter()
    sol = grasp_runs(inst, args.runs, args.cutoff, args.seed)
    _timed("grasp", t0)
    _print_solution(sol, f"w={sol.total} status=Feasible")
    return 0


def cmd_ga(args) -> int:
    inst = read_instance(args.instance)
    params = GaParams(args.initial, args.population, args.cutoff,
                      (args.mutation_lo, args.mutation_hi), args.iterations, args.seed)
    t0 = time.perf_counter()
    res = run_ga(inst, params)
    _timed("ga", t0)
    _print_solution(res.best, f"w={res.best.total} status=Feasible")
    print("history=" + ",".join(str(h) for h in res.history))
    return 0


def cmd_exact(args) -> int:
    inst = read_instance(args.instance)
    t0 = time.perf_counter()
    if args.method == "enum":
        res = enumerate_optimal(inst)
    else:
        res = branch_and_bound(inst, time_limit=args.timelimit)
    _timed("exact", t0)
    _print_solution(res.best, f"w*={res.best.total} status={res.status}")
    print(f"LB={res.lower_bound} gap={fmt_pct(res.optimality_gap_pct)} nodes={res.nodes_explored}")
    return 0


def cmd_export(args) -> int:
    inst = read_instance(args.instance)
    opts = _model_options(inst, args.cuts, args.lifted, args.extk, args.verbatim)
    model = build_model(inst, args.form.upper(), opts)
    out = Path(args.output)
    write_model(model, out)
    prio = out.with_suffix(".prio")
    write_priorities(model, prio)
    print(f"wrote {out} ({len(model.variables)} variables, {len(model.constraints)} constraints)")
    print(f"wrote {prio}")
    return 0


def cmd_cutloop(args) -> int:
    inst = read_instance(args.instance)
    fams = [c.strip().upper() for c in (args.cuts or "").split(",") if c.strip()]
    bad = [f for f in fams if f not in CUT_FAMILIES]
    if bad:
        raise UsageError(f"unknown cut families {bad}; choose from tdomy,clique,extcosts")
    if "EXTCOSTS" in fams and args.form != "f2":
        raise UsageError("extcosts cuts need --form f2")
    opts = _model_options(inst, "", args.lifted, args.extk)
    t0 = time.perf_counter()
    loop = root_cut_loop(inst, args.form.upper(), fams, args.rounds, opts,
                         time_limit=args.timelimit)
    _timed("cutloop", t0)
    for k, b in enumerate(loop.bounds):
        print(f"round {k} bound={b:.6f}")
    counts: dict[str, int] = {}
    for _, c in loop.added_cuts:
        counts[c.tag] = counts.get(c.tag, 0) + 1
    added = ",".join(f"{t}:{counts[t]}" for t in sorted(counts)) or "none"
    status = "TimeLimit" if loop.timed_out else loop.result.status
    print(f"bound={loop.bound:.6f} rounds={loop.rounds} cuts={added} status={status}")
    if args.best_known is not None:
        print(f"lp_gap={gap_pct(args.best_known, loop.bound):.2f}")
    return 0


def cmd_verify(args) -> int:
    model = read_model(args.model)
    assignment = read_assignment(args.assignment)
    rep = verify_assignment(model, assignment)
    print(f"objective={rep.objective} feasible={rep.feasible} "
          f"violated={len(rep.violated)} bound_violations={len(rep.bound_violations)}")
    for name in rep.violated:
        print(f"violated {name}")
    for name in rep.bound_violations:
        print(f"bound {name}")
    return 0 if rep.feasible else 2


# --- bench -------------------------------------------------------------------

def _run_one(task):
    path, solver, seed, timelimit = task
    inst = read_instance(path)
    t0 = time.perf_counter()
    lb = None
    nodes = ""
    status = "Feasible"
    if solver == "heur":
        sol = local_search(inst, starting_heuristic(inst))
    elif solver == "grasp":
        sol = grasp_runs(inst, 100, 30, seed)
        nodes = 100
    elif solver == "ga":
        res = run_ga(inst, GaParams(seed=seed))
        sol = res.best
        nodes = len(res.history) - 1
    elif solver == "bnb":
        res = branch_and_bound(inst, time_limit=timelimit)
        sol, lb, nodes, status = res.best, res.lower_bound, res.nodes_explored, res.status
    elif solver == "enum":
        res = enumerate_optimal(inst)
        sol, lb, nodes, status = res.best, res.lower_bound, res.nodes_explored, res.status
    else:
        raise UsageError(f"unknown solver {solver!r}")
    ms = 1000 * (time.perf_counter() - t0)
    return {"instance": inst.name, "solver": solver, "seed": "" if seed is None else seed,
            "runtime_ms": f"{ms:.1f}", "w_B": sol.total, "LB": "" if lb is None else lb,
            "nodes": nodes, "status": status}


def bench_rows(paths: Sequence[Path], solvers: Sequence[str], seeds: Sequence[int],
               timelimit: float = DEFAULT_TIMELIMIT, jobs: int = 1) -> list[dict]:
    tasks = []
    for p in paths:
        for s in solvers:
            for seed in (seeds if s in RANDOMIZED else [None]):
                tasks.append((str(p), s, seed, timelimit))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            rows = list(ex.map(_run_one, tasks))
    else:
        rows = [_run_one(t) for t in tasks]
    # primal gaps against the best solution of the exact solvers on the same instance
    w_mip: dict[str, int] = {}
    for r in rows:
        if r["solver"] in EXACT:
            w_mip[r["instance"]] = min(w_mip.get(r["instance"], r["w_B"]), r["w_B"])
    for r in rows:
        lb = r["LB"] if r["LB"] != "" else None
        heuristic = r["solver"] not in EXACT
        opt, prim = compute_gaps(r["w_B"], lb, r["w_B"] if heuristic else None,
                                 w_mip.get(r["instance"]) if heuristic else None)
        r["opt_gap"] = fmt_pct(opt)
        r["primal_gap"] = fmt_pct(prim)
    return rows


def rows_to_csv(rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_HEADER, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: r[k] for k in CSV_HEADER})
    return buf.getvalue()


def cmd_bench(args) -> int:
    root = Path(args.dir)
    if not root.is_dir():
        raise FileNotFoundError(f"{root} is not a directory")
    paths = sorted(root.glob("*.wtdp"))
    if not paths:
        raise FileNotFoundError(f"no *.wtdp instances in {root}")
    solvers = [s.strip() for s in args.solvers.split(",") if s.strip()]
    bad = [s for s in solvers if s not in SOLVERS]
    if bad:
        raise UsageError(f"unknown solvers {bad}; choose from {','.join(SOLVERS)}")
    seeds = _parse_ints(args.seeds, "--seeds")
    if any(s in RANDOMIZED for s in solvers) and not seeds:
        raise UsageError("randomized solvers need at least one seed")
    t0 = time.perf_counter()
    rows = bench_rows(paths, solvers, seeds, args.timelimit, args.jobs)
    _timed("bench", t0)
    text = rows_to_csv(rows)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
        print(f"wrote {len(rows)} rows to {args.output}")
    else:
        sys.stdout.write(text)
    return 0


# --- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="wtd", description="Weighted total domination toolkit")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="generate a random instance")
    g.add_argument("--family", choices=("ma", "new"), default="ma")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--p", type=float, required=True)
    g.add_argument("--cu", type=int, choices=(10, 25, 50))
    g.add_argument("--id", type=int, default=1)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_gen)

    e = sub.add_parser("eval", help="evaluate a vertex set")
    e.add_argument("instance")
    e.add_argument("--set", required=True, help="comma-separated vertex indices")
    e.set_defaults(func=cmd_eval)

    h = sub.add_parser("heur", help="starting heuristic followed by local search")
    h.add_argument("instance")
    h.add_argument("--no-ls", action="store_true", help="skip local search")
    h.set_defaults(func=cmd_heur)

    r = sub.add_parser("grasp", help="best of repeated GRASP constructions")
    r.add_argument("instance")
    r.add_argument("--seed", type=int, required=True)
    r.add_argument("--cutoff", type=int, default=30)
    r.add_argument("--runs", type=int, default=100)
    r.set_defaults(func=cmd_grasp)

    a = sub.add_parser("ga", help="genetic algorithm")
    a.add_argument("instance")
    a.add_argument("--seed", type=int, required=True)
    a.add_argument("--cutoff", type=int, default=30)
    a.add_argument("--initial", type=int, default=100)
    a.add_argument("--population", type=int, default=40)
    a.add_argument("--iterations", type=int, default=20)
    a.add_argument("--mutation-lo", type=int, default=1)
    a.add_argument("--mutation-hi", type=int, default=4)
    a.set_defaults(func=cmd_ga)

    x = sub.add_parser("exact", help="solve to optimality")
    x.add_argument("instance")
    x.add_argument("--method", choices=("bnb", "enum"), default="bnb")
    x.add_argument("--timelimit", type=float, default=DEFAULT_TIMELIMIT)
    x.set_defaults(func=cmd_exact)

    def model_flags(sp, with_cuts=True):
        sp.add_argument("--form", required=True, type=str.lower,
                        choices=("f1", "f2", "ma1", "ma2", "ma3") if with_cuts else ("f1", "f2"))
        sp.add_argument("--lifted", action="store_true")
        sp.add_argument("--extk", help="initial external-cost cuts per vertex (F2): K or 'all'")

    x = sub.add_parser("export", help="write a formulation as an LP file plus priorities")
    x.add_argument("instance")
    model_flags(x)
    x.add_argument("--cuts", default="", help="static cuts: tdomy,clique")
    x.add_argument("--verbatim", action="store_true", help="MA2: keep the printed constraint sense")
    x.add_argument("-o", "--output", required=True)
    x.set_defaults(func=cmd_export)

    c = sub.add_parser("cutloop", help="root LP bound with separation rounds")
    c.add_argument("instance")
    model_flags(c, with_cuts=False)
    c.add_argument("--cuts", default="", help="families: tdomy,clique,extcosts")
    c.add_argument("--rounds", type=int, default=10)
    c.add_argument("--timelimit", type=float, default=DEFAULT_TIMELIMIT)
    c.add_argument("--best-known", type=int, help="report the LP gap against this objective")
    c.set_defaults(func=cmd_cutloop)

    v = sub.add_parser("verify", help="check an assignment against an exported model")
    v.add_argument("model", help="LP file written by 'export'")
    v.add_argument("assignment", help="lines '<var> <value>'")
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bench", help="run solvers over a directory of instances, write CSV")
    b.add_argument("dir")
    b.add_argument("--solvers", default="heur,grasp,ga,bnb")
    b.add_argument("--seeds", required=True, help="comma-separated seeds for randomized solvers")
    b.add_argument("--timelimit", type=float, default=DEFAULT_TIMELIMIT)
    b.add_argument("--jobs", type=int, default=1)
    b.add_argument("-o", "--output")
    b.set_defaults(func=cmd_bench)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, InvalidOptions) as exc:
        parser.print_usage(sys.stderr)
        print(f"wtd: error: {exc}", file=sys.stderr)
        return 1
    except (OSError, ParseError, ValidationError, InfeasibleSolution, GenerationFailed,
            LpFormatError, TooLarge, NumericalFailure, ValueError, ZeroDivisionError) as exc:
        print(f"wtd: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
