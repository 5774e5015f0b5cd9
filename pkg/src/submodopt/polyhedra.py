"""Membership, tight sets, dependence structure, and optimality certificates
for the polyhedra attached to a submodular function.

All tests here are exhaustive over the 2**p constraints s(A) <= F(A), so
they live under the same cap as the other enumeration-based operations.
Tolerances are additive and shared through the ``tol`` argument.
"""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from . import _kernels
from .core import (DEFAULT_TOL, EXHAUSTIVE_CAP, SetFunction, check_cap,
                   elements_of, to_explicit)
from .errors import NumericalInconsistency


def _vector(F: SetFunction, s) -> np.ndarray:
    s = np.asarray(s, dtype=np.float64)
    if s.shape != (F.p,):
        raise ValueError(f"vector has shape {s.shape}, expected ({F.p},)")
    return s


def membership_margin(F: SetFunction, s, cap: int = EXHAUSTIVE_CAP) -> tuple[float, int]:
    """max over A of s(A) - F(A), with the smallest maximizing mask.

    Nonpositive margin means s lies in P(F).
    """
    s = _vector(F, s)
    table = to_explicit(F, cap)
    sums = _kernels.subset_sums(s)
    value, arg = _kernels.max_margin(sums, table)
    return float(value), int(arg)


def in_P(F: SetFunction, s, tol: float = DEFAULT_TOL, cap: int = EXHAUSTIVE_CAP) -> bool:
    margin, _ = membership_margin(F, s, cap)
    return margin <= tol


def in_B(F: SetFunction, s, tol: float = DEFAULT_TOL, cap: int = EXHAUSTIVE_CAP) -> bool:
    s = _vector(F, s)
    if abs(float(np.sum(s)) - F((1 << F.p) - 1)) > tol:
        return False
    return in_P(F, s, tol, cap)


def in_P_plus(F: SetFunction, s, tol: float = DEFAULT_TOL, cap: int = EXHAUSTIVE_CAP) -> bool:
    s = _vector(F, s)
    if np.any(s < -tol):
        return False
    return in_P(F, s, tol, cap)


def tight_sets(F: SetFunction, s, tol: float = DEFAULT_TOL,
               cap: int = EXHAUSTIVE_CAP) -> list[int]:
    """All A with |s(A) - F(A)| <= tol, for s in P(F).

    The family of tight sets of a point of P(F) is closed under union and
    intersection; the computed family is verified against that closure and
    a violation raises NumericalInconsistency (the tolerance straddles a
    constraint boundary).
    """
    s = _vector(F, s)
    table = to_explicit(F, cap)
    sums = _kernels.subset_sums(s)
    flags = np.abs(sums - table) <= tol
    masks = np.nonzero(flags)[0].astype(np.int64)
    i, l = _kernels.closure_violation(masks, flags)
    if i >= 0:
        raise NumericalInconsistency(
            f"tight family not a lattice at tol={tol}: "
            f"sets {int(masks[i])} and {int(masks[l])}")
    return [int(m) for m in masks]


def dep(F: SetFunction, s, k: int, tol: float = DEFAULT_TOL,
        cap: int = EXHAUSTIVE_CAP) -> int:
    """Smallest tight set containing element k, for a base s.

    Well defined because tight sets form a lattice and the full ground set
    is tight for any base; computed as the intersection of all tight sets
    containing k.
    """
    if not 0 <= k < F.p:
        raise ValueError(f"element {k} out of range for p={F.p}")
    bit = 1 << k
    out = (1 << F.p) - 1
    for m in tight_sets(F, s, tol, cap):
        if m & bit:
            out &= m
    return out


def exchangeable_pairs(F: SetFunction, s, tol: float = DEFAULT_TOL,
                       cap: int = EXHAUSTIVE_CAP) -> list[tuple[int, int]]:
    """All pairs (k, q) with q in dep(s, k), q != k."""
    pairs = []
    for k in range(F.p):
        d = dep(F, s, k, tol, cap)
        for q in elements_of(d):
            if q != k:
                pairs.append((k, q))
    return pairs


def _level_prefixes(w, descending: bool) -> list[np.ndarray]:
    """Index arrays of the upper (or lower) level sets of w, one per distinct value."""
    w = np.asarray(w, dtype=np.float64)
    values = np.unique(w)  # ascending
    if descending:
        values = values[::-1]
    prefixes = []
    for v in values:
        sel = w >= v if descending else w <= v
        prefixes.append(np.nonzero(sel)[0])
    return prefixes


def is_base_maximizer(F: SetFunction, s, w, tol: float = DEFAULT_TOL,
                      cap: int = EXHAUSTIVE_CAP) -> bool:
    """Whether a base s maximizes w^T s over the base polytope.

    Primary criterion: every upper level set of w must be tight for s.
    The exchangeable-pair form is available separately as
    :func:`base_maximizer_exchange_check` for cross-checking.
    """
    s = _vector(F, s)
    w = _vector(F, w)
    check_cap(F.p, cap)
    for idx in _level_prefixes(w, descending=True):
        mask = int(np.sum(1 << idx.astype(np.int64)))
        if abs(float(np.sum(s[idx])) - F(mask)) > tol:
            return False
    return True


def base_maximizer_exchange_check(F: SetFunction, s, w, tol: float = DEFAULT_TOL,
                                  cap: int = EXHAUSTIVE_CAP) -> bool:
    """Exchange form of the maximizer test: w_k <= w_q for all q in dep(s, k)."""
    w = _vector(F, w)
    for k, q in exchangeable_pairs(F, s, tol, cap):
        if w[k] > w[q] + tol:
            return False
    return True


def is_P_plus_maximizer(F: SetFunction, s, w, tol: float = DEFAULT_TOL,
                        cap: int = EXHAUSTIVE_CAP) -> bool:
    """Whether s maximizes w^T s over P(F) & positive orthant (F non-decreasing).

    Blocks of w with negative value must carry s identically zero; prefixes
    of nonnegative-value blocks must be tight.
    """
    s = _vector(F, s)
    w = _vector(F, w)
    check_cap(F.p, cap)
    values = np.unique(w)[::-1]
    prefix = np.zeros(F.p, dtype=bool)
    for v in values:
        block = w == v
        if v < 0.0:
            if np.any(np.abs(s[block]) > tol):
                return False
        else:
            prefix |= block
            idx = np.nonzero(prefix)[0]
            mask = int(np.sum(1 << idx.astype(np.int64)))
            if abs(float(np.sum(s[idx])) - F(mask)) > tol:
                return False
    return True


def _proper_submasks(mask: int):
    """Nonempty proper submasks of a bitmask, ascending."""
    sub = (mask - 1) & mask
    seen = []
    while sub:
        seen.append(sub)
        sub = (sub - 1) & mask
    return sorted(seen)


def separable_witness(F: SetFunction, A: int, tol: float = DEFAULT_TOL,
                      cap: int = EXHAUSTIVE_CAP) -> Optional[int]:
    """A nonempty proper part B of A with F(A) = F(B) + F(A - B), if any.

    Returns the smallest such bitmask, or None when A is inseparable.
    """
    if A == 0:
        raise ValueError("separability is defined for nonempty sets")
    check_cap(int(A).bit_count(), cap)
    fa = F(A)
    for b in _proper_submasks(A):
        if abs(F(b) + F(A ^ b) - fa) <= tol:
            return b
    return None


def face_check(F: SetFunction, partition: Sequence[int], tol: float = DEFAULT_TOL,
               cap: int = EXHAUSTIVE_CAP) -> bool:
    """Whether an ordered partition of V picks out a face with relative interior.

    Each block must be inseparable for the contraction of F by the union of
    the preceding blocks.
    """
    full = (1 << F.p) - 1
    union = 0
    for block in partition:
        if block == 0 or (block & union):
            raise ValueError("partition blocks must be nonempty and disjoint")
        prefix = union
        base_val = F(prefix)
        contracted = SetFunction(
            F.p, lambda m, pre=prefix, bv=base_val: F(pre | m) - bv)
        if separable_witness(contracted, block, tol, cap) is not None:
            return False
        union |= block
    if union != full:
        raise ValueError("partition does not cover the ground set")
    return True
