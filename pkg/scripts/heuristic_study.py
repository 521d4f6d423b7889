"""Primal gaps of the heuristics against branch-and-bound on generated instances.

For each instance of a NEW-family grid (vertex/edge cost ranges by ``--cu``) this
runs the starting heuristic with local search, best-of-100 GRASP and the genetic
algorithm for every seed, and reports the mean primal gap per (solver, n, p, cu).

    python scripts/heuristic_study.py --n 20 30 --p 0.2 0.5 --cu 10 50 --seeds 1 2 3
"""

import argparse
import sys
from collections import defaultdict
from fractions import Fraction

from wtdp.cli import compute_gaps, fmt_pct
from wtdp.exact import branch_and_bound
from wtdp.genetic import GaParams, grasp_runs, run_ga
from wtdp.heuristics import local_search, starting_heuristic
from wtdp.instance_io import GenSpec, generate


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[20, 30])
    ap.add_argument("--p", type=float, nargs="+", default=[0.2, 0.5])
    ap.add_argument("--cu", type=int, nargs="+", default=[10, 50])
    ap.add_argument("--ids", type=int, default=2)
    ap.add_argument("--seeds", type=int, nargs="+", default=[1, 2, 3])
    ap.add_argument("--timelimit", type=float, default=60.0)
    args = ap.parse_args(argv)

    gaps = defaultdict(list)
    k = 0
    for n in args.n:
        for p in args.p:
            for cu in args.cu:
                for i in range(1, args.ids + 1):
                    inst = generate(GenSpec.new(n, p, cu, id=i, seed=k))
                    k += 1
                    ref = branch_and_bound(inst, time_limit=args.timelimit)
                    w_mip = ref.best.total
                    found = {"heur": [local_search(inst, starting_heuristic(inst)).total]}
                    found["grasp"] = [grasp_runs(inst, 100, 30, s).total for s in args.seeds]
                    found["ga"] = [run_ga(inst, GaParams(seed=s)).best.total for s in args.seeds]
                    for solver, values in found.items():
                        for v in values:
                            gaps[(solver, n, p, cu)].append(compute_gaps(None, None, v, w_mip)[1])
                    print(f"{inst.name}: w_MIP={w_mip} ({ref.status}) " +
                          " ".join(f"{s}={min(v)}" for s, v in found.items()), file=sys.stderr)
    print("solver,n,p,cu,runs,mean_primal_gap")
    for (solver, n, p, cu), vals in sorted(gaps.items()):
        print(f"{solver},{n},{p},{cu},{len(vals)},{fmt_pct(sum(vals, Fraction(0)) / len(vals))}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
