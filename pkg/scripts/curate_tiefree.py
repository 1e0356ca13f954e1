#!/usr/bin/env python3
"""Find instances whose whole searches never tie two promise scores.

The trace-equality check between the ties schemes and their plain bases is
only meaningful on runs where every branch node scores its values pairwise
distinctly; on mixed random instances that almost never holds (the last
branched variables score everything 1).  Tight unsatisfiable model-B
instances fail before reaching those nodes: this script scans a seed range
and prints the seeds whose full dway and 2way runs stay tie-free, which is
how the pinned list in the acceptance tests was produced.
"""

import argparse
import sys

import branchbench.search as search_mod
from branchbench.branching import parse_scheme, plan as real_plan
from branchbench.generators import gen_randomb
from branchbench.heuristics import score_domain
from branchbench.search import solve


def run_tie_checked(problem, scheme_name):
    ties = [0]

    def checking_plan(scheme, state, x):
        scores = [sv.score for sv in score_domain(state, x)]
        if len(set(scores)) != len(scores):
            ties[0] += 1
        return real_plan(scheme, state, x)

    search_mod.plan = checking_plan
    try:
        out = solve(problem, parse_scheme(scheme_name))
    finally:
        search_mod.plan = real_plan
    return out, ties[0]


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=16)
    ap.add_argument("--d", type=int, default=10)
    ap.add_argument("--p1", type=int, default=70)
    ap.add_argument("--p2", type=int, default=41)
    ap.add_argument("--seeds", type=int, default=260, help="scan range(seeds)")
    ap.add_argument("--min-nodes", type=int, default=12)
    ap.add_argument("--max-nodes", type=int, default=4000)
    ap.add_argument("--want", type=int, default=30)
    args = ap.parse_args()

    good = []
    for seed in range(args.seeds):
        problem = gen_randomb(args.n, args.d, args.p1, args.p2, seed)
        out_d, ties_d = run_tie_checked(problem, "dway")
        if ties_d or not (args.min_nodes <= out_d.stats.nodes <= args.max_nodes):
            continue
        out_2, ties_2 = run_tie_checked(problem, "2way")
        if ties_2:
            continue
        good.append(seed)
        print(
            f"seed {seed:4d}  {out_d.status.value:5s}  "
            f"dway {out_d.stats.nodes:4d} nodes  2way {out_2.stats.nodes:4d} nodes",
            file=sys.stderr,
        )
        if len(good) >= args.want:
            break

    print(f"TIE_FREE_SEEDS = {tuple(good)}")
    return 0 if len(good) >= args.want else 1


if __name__ == "__main__":
    sys.exit(main())
