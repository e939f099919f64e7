"""Reconcile every lct engine on a block of seeded random curves and print a
summary: how often each distinguished-vertex kind and two-branch case occurs,
how often the pair-based separating expression disagrees, and the timings.

    python3 scripts/run_suite.py --count 2000 --points 40 --branches 6
"""

import argparse
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor

from plane_lct.errors import LctError
from plane_lct.gen import GenConfig, random_pair_spec, random_spec
from plane_lct.lct import reconcile


def evaluate(args):
    seed, points, branches, pairs = args
    config = GenConfig(seed=seed, max_points=points, max_branches=branches)
    spec = random_pair_spec(config) if pairs else random_spec(config)
    try:
        report = reconcile(spec)
    except LctError as exc:
        return seed, spec.m, spec.r, None, None, None, exc.code
    diag = report.pair_diagnostic
    return seed, spec.m, spec.r, report.vertex_kind, report.corollary_case, \
        None if diag is None else diag["all_agree"], None


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=1000)
    p.add_argument("--points", type=int, default=40)
    p.add_argument("--branches", type=int, default=6)
    p.add_argument("--pairs", action="store_true", help="glued two-branch generator")
    p.add_argument("--workers", type=int, default=1)
    args = p.parse_args()

    jobs = [(s, args.points, args.branches, args.pairs) for s in range(args.seed, args.seed + args.count)]
    t = time.perf_counter()
    if args.workers > 1:
        with ProcessPoolExecutor(args.workers) as pool:
            rows = list(pool.map(evaluate, jobs, chunksize=50))
    else:
        rows = [evaluate(j) for j in jobs]
    elapsed = time.perf_counter() - t

    kinds = Counter(r[3] for r in rows if r[3])
    cases = Counter(r[4] for r in rows if r[4])
    pair_expr = Counter(r[5] for r in rows if r[5] is not None)
    errors = [(r[0], r[6]) for r in rows if r[6]]
    print(f"instances        {len(rows)} in {elapsed:.1f} s")
    print(f"mean size        {sum(r[1] for r in rows) / max(1, len(rows)):.1f} points, "
          f"{sum(r[2] for r in rows) / max(1, len(rows)):.2f} branches")
    print(f"vertex kinds     {dict(kinds)}")
    print(f"two-branch cases {dict(sorted(cases.items()))}")
    print(f"pair expression  matches {pair_expr[True]}, differs {pair_expr[False]} (separating cases)")
    print(f"errors           {len(errors)} {errors[:10]}")


if __name__ == "__main__":
    main()
