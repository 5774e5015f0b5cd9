"""Lovász extension, greedy linear optimization, support values, conjugate.

The extension of a set-function F to real vectors sorts the coordinates in
descending order and telescopes F along the prefix chain.  For submodular
F the same chain yields a maximizer of w^T s over the base polytope (the
greedy algorithm); sorting is stable with ascending-index tie-break so all
outputs are deterministic even when maximizers are not unique.
"""

from __future__ import annotations

import math

import numpy as np

from . import _kernels
from .core import EXHAUSTIVE_CAP, SetFunction, to_explicit


def descending_order(w) -> np.ndarray:
    """Indices sorting w descending, ties broken by ascending index."""
    w = np.asarray(w, dtype=np.float64)
    if not np.all(np.isfinite(w)):
        raise ValueError("weight vector must be finite")
    return np.argsort(-w, kind="stable")


def _check_dim(F: SetFunction, w) -> np.ndarray:
    w = np.asarray(w, dtype=np.float64)
    if w.shape != (F.p,):
        raise ValueError(f"vector has shape {w.shape}, expected ({F.p},)")
    return w


def lovasz_extension(F: SetFunction, w) -> float:
    """Extension value f(w) via the sorted-prefix telescoping sum."""
    w = _check_dim(F, w)
    order = descending_order(w)
    total = 0.0
    mask = 0
    prev = 0.0
    for j in order:
        mask |= 1 << int(j)
        cur = F(mask)
        total += w[j] * (cur - prev)
        prev = cur
    return total


def greedy_base(F: SetFunction, w) -> np.ndarray:
    """Vertex of the base polytope maximizing w^T s (F submodular).

    Assigns each element its marginal gain along the descending-w prefix
    chain; w may have negative entries.  Satisfies w^T s == f(w).
    """
    w = _check_dim(F, w)
    order = descending_order(w)
    s = np.empty(F.p, dtype=np.float64)
    mask = 0
    prev = 0.0
    for j in order:
        mask |= 1 << int(j)
        cur = F(mask)
        s[j] = cur - prev
        prev = cur
    return s


def truncated_greedy(F: SetFunction, w) -> np.ndarray:
    """Maximizer of w^T s over P(F) intersected with the positive orthant.

    Requires F submodular and non-decreasing.  Only strictly positive
    coordinates of w receive marginal gains; the rest are zero.  The value
    w^T s equals f(max(w, 0)).
    """
    w = _check_dim(F, w)
    order = [int(j) for j in descending_order(w) if w[j] > 0.0]
    s = np.zeros(F.p, dtype=np.float64)
    mask = 0
    prev = 0.0
    for j in order:
        mask |= 1 << j
        cur = F(mask)
        s[j] = cur - prev
        prev = cur
    return s


def support_P(F: SetFunction, w) -> float:
    """sup of w^T s over the unbounded polyhedron P(F).

    Finite (equal to f(w)) only for entrywise nonnegative w; any negative
    coordinate makes the value +inf, returned as ``math.inf`` rather than
    raised, since it is a legitimate answer.
    """
    w = _check_dim(F, w)
    if np.any(w < 0.0):
        return math.inf
    return lovasz_extension(F, w)


def conjugate(F: SetFunction, s, cap: int = EXHAUSTIVE_CAP) -> tuple[float, int]:
    """Discrete conjugate max_A s(A) - F(A) by exhaustive scan.

    Returns ``(value, argmax_mask)`` with the smallest bitmask among tied
    maximizers.
    """
    s = np.asarray(s, dtype=np.float64)
    if s.shape != (F.p,):
        raise ValueError(f"vector has shape {s.shape}, expected ({F.p},)")
    table = to_explicit(F, cap)
    sums = _kernels.subset_sums(s)
    value, arg = _kernels.max_margin(sums, table)
    return float(value), int(arg)
