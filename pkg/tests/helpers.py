"""Shared brute-force oracles for the test suite.

These deliberately avoid the library's kernel code paths wherever they are
used to cross-check them: plain python enumeration only.
"""

import itertools

import numpy as np

from submodopt import SetFunction, elements_of


def powerset_masks(p):
    return range(1 << p)


def brute_min(F: SetFunction):
    """Plain-python exhaustive minimum with lattice extremes."""
    best = None
    mins = []
    for m in powerset_masks(F.p):
        v = F(m)
        if best is None or v < best:
            best = v
            mins = [m]
        elif v == best:
            mins.append(m)
    amin = mins[0]
    omin = 0
    for m in mins:
        amin &= m
        omin |= m
    return best, amin, omin, mins


def modular_sum(s, mask):
    return float(sum(s[k] for k in elements_of(mask)))


def brute_in_P(F: SetFunction, s, tol=1e-9):
    return all(modular_sum(s, m) <= F(m) + tol for m in powerset_masks(F.p))


def lovasz_by_breakpoints(F: SetFunction, w):
    """Extension value by exact integration of the level-set profile.

    Independent of the telescoping implementation: integrates
    z -> F({w >= z}) between consecutive breakpoints and adds the
    F(V) * min(w) tail.
    """
    w = np.asarray(w, dtype=float)
    values = np.unique(w)[::-1]
    total = 0.0
    for i in range(len(values) - 1):
        level = 0
        for k in range(F.p):
            if w[k] >= values[i]:
                level |= 1 << k
        total += F(level) * (values[i] - values[i + 1])
    full = (1 << F.p) - 1
    total += F(full) * values[-1]
    return total


def lovasz_split_at_zero(F: SetFunction, w):
    """Extension via the two-sided integral form, split at zero.

    Integrates F({w >= z}) on (0, inf) and F({w >= z}) - F(V) on (-inf, 0),
    both piecewise constant with breakpoints at the entries of w.
    """
    w = np.asarray(w, dtype=float)
    full = (1 << F.p) - 1
    pts = np.unique(np.concatenate([w, [0.0]]))
    total = 0.0
    # below zero: integrand F({w>=z}) - F(V), zero for z below min(w)
    neg = pts[pts <= 0.0]
    for lo, hi in zip(neg[:-1], neg[1:]):
        mid = 0.5 * (lo + hi)
        level = 0
        for k in range(F.p):
            if w[k] >= mid:
                level |= 1 << k
        total += (F(level) - F(full)) * (hi - lo)
    # above zero: integrand F({w>=z}), zero beyond max(w)
    pos = pts[pts >= 0.0]
    for lo, hi in zip(pos[:-1], pos[1:]):
        mid = 0.5 * (lo + hi)
        level = 0
        for k in range(F.p):
            if w[k] >= mid:
                level |= 1 << k
        total += F(level) * (hi - lo)
    return total


def all_descending_orders(w):
    """Every permutation consistent with a descending sort of w."""
    w = np.asarray(w, dtype=float)
    p = len(w)
    for perm in itertools.permutations(range(p)):
        if all(w[perm[i]] >= w[perm[i + 1]] for i in range(p - 1)):
            yield perm


def lovasz_for_order(F: SetFunction, w, order):
    total = 0.0
    mask = 0
    prev = 0.0
    for j in order:
        mask |= 1 << j
        cur = F(mask)
        total += w[j] * (cur - prev)
        prev = cur
    return total


def batch_subset_sums(vectors):
    """Subset-sum tables for many vectors at once: (n, 2**p) array."""
    vectors = np.asarray(vectors, dtype=float)
    n, p = vectors.shape
    out = np.zeros((n, 1))
    for k in range(p):
        out = np.concatenate([out, out + vectors[:, k:k + 1]], axis=1)
    return out
