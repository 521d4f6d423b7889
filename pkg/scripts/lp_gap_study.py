"""LP gap of the root relaxation for several formulation/cut configurations.

Generates a grid of MA-style random instances, solves each to optimality with
branch-and-bound (for the reference objective), runs the root cut loop for every
configuration and writes one CSV row per (instance, configuration).

    python scripts/lp_gap_study.py --n 10 14 --p 0.2 0.5 0.8 --ids 3 -o lp_gaps.csv
"""

import argparse
import csv
import sys
import time

from wtdp.exact import OPTIMAL, branch_and_bound
from wtdp.instance_io import GenSpec, generate
from wtdp.lp import gap_pct, root_cut_loop
from wtdp.mip import ModelOptions

CONFIGS = [
    ("F1", (), None),
    ("F1", ("TDOMY",), None),
    ("F1", ("CLIQUE",), None),
    ("F1", ("TDOMY", "CLIQUE"), None),
    ("F2", ("EXTCOSTS",), 1),
    ("F2", ("TDOMY", "CLIQUE", "EXTCOSTS"), 1),
]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[10, 14])
    ap.add_argument("--p", type=float, nargs="+", default=[0.2, 0.5, 0.8])
    ap.add_argument("--ids", type=int, default=3, help="instances per (n, p)")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--rounds", type=int, default=10)
    ap.add_argument("--timelimit", type=float, default=60.0, help="per branch-and-bound run")
    ap.add_argument("-o", "--output", default="-")
    args = ap.parse_args(argv)

    out = sys.stdout if args.output == "-" else open(args.output, "w", newline="")
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["instance", "n", "p", "w_B", "status", "formulation", "cuts", "rounds", "w_LP",
                "lp_gap"])
    k = 0
    for n in args.n:
        for p in args.p:
            for i in range(1, args.ids + 1):
                inst = generate(GenSpec.ma(n, p, id=i, seed=args.seed + k))
                k += 1
                t0 = time.perf_counter()
                exact = branch_and_bound(inst, time_limit=args.timelimit)
                w_b = exact.best.total
                print(f"{inst.name}: w_B={w_b} ({exact.status}, {time.perf_counter() - t0:.1f} s)",
                      file=sys.stderr)
                for form, fams, k0 in CONFIGS:
                    opts = ModelOptions(extcost_init_k=k0) if k0 else None
                    loop = root_cut_loop(inst, form, fams, args.rounds, opts)
                    w.writerow([inst.name, n, p, w_b, exact.status, form, "+".join(fams) or "-",
                                loop.rounds, f"{loop.bound:.6f}", f"{gap_pct(w_b, loop.bound):.2f}"])
                out.flush()
    if out is not sys.stdout:
        out.close()
    return 0


if __name__ == "__main__":
    sys.exit(main())
