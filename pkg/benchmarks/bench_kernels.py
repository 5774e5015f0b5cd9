#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallbacks.

The kernels enumerate all 2**p subsets of a ground set, which is where the
exhaustive checkers and brute-force oracles spend their time.  Run as

    python benchmarks/bench_kernels.py --p 16 --repeats 3

Numba warms up (and disk-caches) its compilations before timing.  The same
comparison can be driven through the test suite by exporting
SUBMODOPT_DISABLE_NUMBA=1.
"""

import argparse
import time

import numpy as np

from submodopt import _kernels as K


def timed(fn, *args, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=int, default=16,
                    help="ground-set size (table of 2**p values)")
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()

    p = args.p
    n = 1 << p
    rng = np.random.default_rng(0)
    # a submodular, monotone table (sqrt of cardinality plus a nonnegative
    # modular part) so the violation scans run to completion instead of
    # exiting at the first witness
    popcount = np.array([int(m).bit_count() for m in range(n)], dtype=float)
    table = np.sqrt(popcount) + K._subset_sums_np(rng.random(p) * 0.1)
    table[0] = 0.0
    s = rng.standard_normal(p)
    sums = K._subset_sums_np(s)

    cases = [
        ("subset_sums (2**%d)" % p,
         K._subset_sums_nb, K._subset_sums_np, (s,)),
        ("max_margin",
         K._max_margin_nb, K._max_margin_np, (sums, table)),
        ("argmin_extremes",
         K._argmin_extremes_nb, K._argmin_extremes_np, (table,)),
        ("second_order_check (p^2 2^p)",
         K._second_order_nb, K._second_order_np, (table, p, 1e-9)),
        ("monotone_check",
         K._monotone_nb, K._monotone_np, (table, p, 1e-9)),
        ("mobius_transform",
         K._mobius_nb, K._mobius_np, (table,)),
        ("zeta_transform",
         K._zeta_nb, K._zeta_np, (table,)),
    ]
    if p <= 13:  # the 4**p pairwise sweep gets big fast
        cases.append(("pairwise_check (4^p)",
                      K._pairwise_nb, K._pairwise_np, (table, p, 1e-9, True)))

    if not K.HAVE_NUMBA:
        print("numba unavailable or disabled; timing the numpy path only\n")

    print(f"{'kernel':<32} {'numba':>12} {'numpy':>12} {'speedup':>9}")
    for name, nb, npth, call_args in cases:
        if K.HAVE_NUMBA:
            nb(*call_args)  # compile outside the timer
            t_nb, out_nb = timed(nb, *call_args, repeats=args.repeats)
        else:
            t_nb, out_nb = float("nan"), None
        t_np, out_np = timed(npth, *call_args, repeats=args.repeats)
        if out_nb is not None:
            same = (np.array_equal(out_nb, out_np)
                    if isinstance(out_np, np.ndarray) else out_nb == out_np)
            assert same, f"paths disagree on {name}"
        ratio = t_np / t_nb if t_nb == t_nb and t_nb > 0 else float("nan")
        print(f"{name:<32} {t_nb * 1e3:>10.2f}ms {t_np * 1e3:>10.2f}ms "
              f"{ratio:>8.1f}x")


if __name__ == "__main__":
    main()
