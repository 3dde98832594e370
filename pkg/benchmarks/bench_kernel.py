"""Compare the compiled and pure-Python case-search kernels.

    python benchmarks/bench_kernel.py [--repeat N] [--quick]

Each row runs one full search with both backends, checks that they agree
on the verdict, the number of cases covered and the number of nodes, and
prints the best wall time of ``--repeat`` runs.
"""

from __future__ import annotations

import argparse
import sys
import time

from gozinta import kernel
from gozinta.achievability import PermSpec, achievable
from gozinta.perms import all_perms, parse_perm, reverse

WORKLOADS = [
    ("4 boxes, 3-D, 4321", 4, 3, (reverse(4),), False),
    ("5 boxes, 2-D, 54321", 5, 2, (reverse(5),), False),
    ("4 boxes, 2-D, 4321 normalized", 4, 2, (reverse(4),), True),
    ("4 boxes, 3-D, 2413", 4, 3, (parse_perm("2413"),), False),
    ("3 boxes, 2-D, all of S3", 3, 2, tuple(all_perms(3)), False),
    ("3 boxes, 3-D, all of S3", 3, 3, tuple(all_perms(3)), False),
]
QUICK = 3


def best_time(spec, normalize, backend, repeat):
    best = None
    result = None
    for _ in range(repeat):
        start = time.perf_counter()
        result = achievable(spec, normalize=normalize, workers=1, backend=backend)
        elapsed = time.perf_counter() - start
        best = elapsed if best is None else min(best, elapsed)
    return result, best


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--quick", action="store_true", help="only the first few workloads")
    args = parser.parse_args(argv)
    if not kernel.NATIVE_AVAILABLE:
        print("compiled kernel not built; run `pip install -e .` first", file=sys.stderr)
        return 1
    rows = WORKLOADS[:QUICK] if args.quick else WORKLOADS
    header = f"{'workload':34} {'verdict':17} {'cases':>14} {'nodes':>9} " \
             f"{'cython s':>9} {'python s':>9} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for label, k, n, perms, normalize in rows:
        spec = PermSpec(k, n, perms)
        cy, t_cy = best_time(spec, normalize, "cython", args.repeat)
        py, t_py = best_time(spec, normalize, "python", args.repeat)
        if (type(cy), cy.cases_checked, cy.nodes) != (type(py), py.cases_checked, py.nodes):
            print(f"{label}: backends disagree", file=sys.stderr)
            return 1
        print(f"{label:34} {type(cy).__name__:17} {cy.cases_checked:>14} {cy.nodes:>9} "
              f"{t_cy:>9.3f} {t_py:>9.3f} {t_py / max(t_cy, 1e-9):>7.0f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
