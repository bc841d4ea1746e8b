"""Reproduce the worked examples: degeneracy page, ad_Λ, E_1 grids and timings.

    python scripts/reproduce_examples.py [--grids]
"""

import argparse
import os
import sys
import time

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "tests"))

from helpers import example_cases  # noqa: E402

from hpss.calculus import ad_bivector  # noqa: E402
from hpss.cli import grid  # noqa: E402
from hpss.spectral import degeneracy_page  # noqa: E402


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--grids", action="store_true", help="print the E_1 grid of every case")
    args = ap.parse_args()

    print(f"{'case':<42} {'N':>2} {'ad=0':>5} {'page':>4} {'expect':>6} {'sec':>6}")
    mismatches = 0
    for label, spec, lam, expected in example_cases():
        t0 = time.perf_counter()
        rep = degeneracy_page(spec, lam)
        dt = time.perf_counter() - t0
        ad_zero = ad_bivector(spec, lam).is_zero()
        flag = "" if rep.page == expected else "  <-- mismatch"
        mismatches += rep.page != expected
        print(f"{label:<42} {spec.N:>2} {str(ad_zero):>5} {rep.page:>4} {expected:>6} {dt:6.2f}{flag}")
        if args.grids:
            print(grid(rep.pages[0].dims, spec.N, "E_1"))
            print()
    print(f"\n{mismatches} mismatch(es)")
    return 1 if mismatches else 0


if __name__ == "__main__":
    sys.exit(main())
