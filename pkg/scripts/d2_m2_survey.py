"""How often does d_2 survive once the centre has dimension m = 2?

For m = 1 the sequence always stops at E_2. With two central directions that
argument is unavailable, and this survey counts degeneracy pages for random
holomorphic Poisson structures on random (n, 2) algebras. Every nonzero d_2
is cross-checked against the zig-zag construction.

    python scripts/d2_m2_survey.py --n 2 3 --count 30
"""

import argparse
import collections
import os
import random
import sys
import time

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "tests"))

from helpers import random_holomorphic, random_spec  # noqa: E402

from hpss.spectral import SpectralSequence, d2_crosscheck, degeneracy_page  # noqa: E402


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[2, 3])
    ap.add_argument("--m", type=int, default=2)
    ap.add_argument("--count", type=int, default=20)
    ap.add_argument("--seed", type=int, default=12)
    ap.add_argument("--density", type=float, default=0.3)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    for n in args.n:
        pages = collections.Counter()
        disagreements = 0
        t0 = time.perf_counter()
        for _ in range(args.count):
            spec = random_spec(rng, n, args.m, density=args.density)
            lam = random_holomorphic(rng, spec)
            seq = SpectralSequence(spec, lam)
            rep = degeneracy_page(spec, lam, strict=False)
            pages[rep.page] += 1
            if rep.page >= 3:
                disagreements += not d2_crosscheck(spec, lam, seq)["ok"]
        dt = time.perf_counter() - t0
        print(f"n={n} m={args.m}: pages {dict(sorted(pages.items()))}, "
              f"zig-zag disagreements {disagreements}, {dt:.1f}s")


if __name__ == "__main__":
    main()
