"""Sweep random m = 1 algebras and check the degeneracy theorems on each.

For every instance Λ = W∧T + Λ2 (Λ2 a holomorphic t^(2,0) bivector) we record
the degeneracy page, whether the exactness equation is solvable, whether Λ2 is
Schouten-central and the rank of d rhobar, then tally agreement with:

  * E_2 = E_inf always,
  * E_1 = E_inf iff (solvable and central),
  * full rank and central implies E_1 = E_inf.

    python scripts/random_theorem_sweep.py --count 200 --seed 1 --json out.json
"""

import argparse
import collections
import json
import os
import random
import sys
import time

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "tests"))

from helpers import random_m1_lambda, random_spec  # noqa: E402

from hpss.calculus import is_schouten_central  # noqa: E402
from hpss.spectral import _lambda_parts, degeneracy_page, drho_rank, exactness_solver, lambda1_vector  # noqa: E402


def run_one(spec, lam):
    rep = degeneracy_page(spec, lam, strict=False)
    solvable = exactness_solver(spec, lambda1_vector(spec, lam)) is not None
    central = is_schouten_central(spec, _lambda_parts(spec, lam)[1])
    rank = drho_rank(spec)[1]
    return {
        "n": spec.n,
        "page": rep.page,
        "solvable": solvable,
        "central": central,
        "rank": rank,
        "theorems": rep.theorems,
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--n-max", type=int, default=3)
    ap.add_argument("--json", help="write per-instance records here")
    args = ap.parse_args()

    rng = random.Random(args.seed)
    records = []
    t0 = time.perf_counter()
    for _ in range(args.count):
        n = rng.randint(1, args.n_max)
        spec = random_spec(rng, n, 1, density=rng.choice((0.25, 0.5, 0.9)))
        records.append(run_one(spec, random_m1_lambda(rng, spec)))
    dt = time.perf_counter() - t0

    pages = collections.Counter(r["page"] for r in records)
    cells = collections.Counter((r["solvable"], r["central"], r["page"]) for r in records)
    failures = [r for r in records if any(v is False for v in r["theorems"].values())]

    print(f"{args.count} instances in {dt:.1f}s; pages: {dict(sorted(pages.items()))}")
    print("solvable central page  count")
    for (s, c, p), k in sorted(cells.items()):
        print(f"{str(s):>8} {str(c):>7} {p:>4} {k:>6}")
    print(f"theorem violations: {len(failures)}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(records, fh, indent=1)
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
