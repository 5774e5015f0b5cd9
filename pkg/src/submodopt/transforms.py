"""Submodularity-preserving constructions.

Restriction, contraction, partial minimization, convolution with a modular
function, monotonization, arithmetic combinators, and Moebius inversion of
the cover representation.  All transforms are lazy memoized oracles rather
than materialized tables, so they compose freely; the per-query enumeration
cost (where there is one) is guarded by the usual cap.

Restriction and contraction re-index their ground set compactly; the
old-index list is recorded on the returned function (``elements``) so
results can be routed back to the parent coordinates.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from . import _kernels
from .core import (EXHAUSTIVE_CAP, ExplicitFunction, SetFunction, check_cap,
                   complement, elements_of, to_explicit)
from .errors import NegativeScale


def embed_mask(mask: int, elements: Sequence[int]) -> int:
    """Map a compact-index bitmask to parent coordinates."""
    out = 0
    k = 0
    while mask:
        if mask & 1:
            out |= 1 << elements[k]
        mask >>= 1
        k += 1
    return out


def project_mask(mask: int, elements: Sequence[int]) -> int:
    """Map a parent bitmask to compact coordinates (elements outside are dropped)."""
    out = 0
    for k, e in enumerate(elements):
        if mask & (1 << e):
            out |= 1 << k
    return out


class ReindexedFunction(SetFunction):
    """Set-function on a compact 0..m-1 ground set derived from a parent.

    ``elements[k]`` is the parent coordinate of local element k.
    """

    __slots__ = ("elements",)

    def __init__(self, elements, fn, memoize=True):
        self.elements = tuple(int(e) for e in elements)
        super().__init__(len(self.elements), fn, memoize=memoize)


def restrict(F: SetFunction, A: int) -> ReindexedFunction:
    """Restriction of F to the subsets of A, re-indexed to 0..|A|-1."""
    if A == 0:
        raise ValueError("cannot restrict to the empty set")
    elems = elements_of(A)
    return ReindexedFunction(elems, lambda m: F(embed_mask(m, elems)))


def contract(F: SetFunction, A: int) -> ReindexedFunction:
    """Contraction by A: B -> F(A | B) - F(A) on the complement, re-indexed."""
    rest = complement(A, F.p)
    if rest == 0:
        raise ValueError("contraction by the full ground set leaves nothing")
    elems = elements_of(rest)
    base = F(A)
    return ReindexedFunction(elems, lambda m: F(A | embed_mask(m, elems)) - base)


def partial_min(G: SetFunction, W: int, cap: int = EXHAUSTIVE_CAP) -> ReindexedFunction:
    """Partial minimum over the W coordinates of a joint submodular G.

    F(A) = min over B subset of W of G(A | B), minus the same minimum at
    A empty (so F(empty) = 0).  Each query enumerates 2**|W| completions.
    """
    q = int(W).bit_count()
    check_cap(q, cap)
    w_elems = elements_of(W)
    v_elems = elements_of(complement(W, G.p))
    if not v_elems:
        raise ValueError("no coordinates left after removing W")
    w_subs = [embed_mask(m, w_elems) for m in range(1 << q)]
    offset = min(G(b) for b in w_subs)

    def fn(mask: int) -> float:
        a = embed_mask(mask, v_elems)
        return min(G(a | b) for b in w_subs) - offset

    return ReindexedFunction(v_elems, fn)


def convolve_modular(F: SetFunction, z, cap: int = EXHAUSTIVE_CAP) -> SetFunction:
    """Infimal convolution with the modular function z.

    G(A) = min over B subset of A of F(B) + z(A - B); G <= F and G <= z
    pointwise.  Each query enumerates the 2**|A| submasks of A.
    """
    z = np.asarray(z, dtype=np.float64)
    if z.shape != (F.p,):
        raise ValueError(f"vector has shape {z.shape}, expected ({F.p},)")
    zsums = _kernels.subset_sums(z)

    def fn(mask: int) -> float:
        check_cap(int(mask).bit_count(), cap)
        best = F(mask)  # B = A
        sub = (mask - 1) & mask
        while True:
            v = F(sub) + float(zsums[mask ^ sub])
            if v < best:
                best = v
            if sub == 0:
                break
            sub = (sub - 1) & mask
        return best

    return SetFunction(F.p, fn, memoize=True)


def monotonize(F: SetFunction, cap: int = EXHAUSTIVE_CAP) -> SetFunction:
    """Non-decreasing envelope G(A) = min over supersets B of A of F(B), shifted to 0.

    The shift is the global minimum of F, so G(empty) = 0 and G stays
    submodular; its base polytope is the nonnegative part of the one of F.
    """
    check_cap(F.p, cap)
    full = (1 << F.p) - 1
    offset = min(F(m) for m in range(1 << F.p))

    def fn(mask: int) -> float:
        rest = full ^ mask
        best = F(mask | rest)  # B = V
        sub = (rest - 1) & rest
        while True:
            v = F(mask | sub)
            if v < best:
                best = v
            if sub == 0:
                break
            sub = (sub - 1) & rest
        return best - offset

    return SetFunction(F.p, fn, memoize=True)


def add(F: SetFunction, G: SetFunction) -> SetFunction:
    if F.p != G.p:
        raise ValueError("ground sets differ")
    return SetFunction(F.p, lambda m: F(m) + G(m), memoize=True)


def scale(F: SetFunction, lam: float) -> SetFunction:
    lam = float(lam)
    if lam < 0.0:
        raise NegativeScale(f"scale factor must be nonnegative, got {lam}")
    return SetFunction(F.p, lambda m: lam * F(m), memoize=True)


def add_modular(F: SetFunction, s) -> SetFunction:
    s = np.asarray(s, dtype=np.float64)
    if s.shape != (F.p,):
        raise ValueError(f"vector has shape {s.shape}, expected ({F.p},)")
    sums = _kernels.subset_sums(s)
    return SetFunction(F.p, lambda m: F(m) + float(sums[m]), memoize=True)


def mobius(F: SetFunction, cap: int = EXHAUSTIVE_CAP) -> np.ndarray:
    """Group weights D of the cover representation of F.

    F(A) = sum of D(G) over groups G meeting A, equivalently
    F(A) = sum_G D(G) - sum over G inside V-A of D(G).  Inverting that
    identity gives D(G) as the alternating-sign subset sum of the values
    F(V) - F(V - A) over A inside G; D[0] is always zero.  Nonnegative D
    happens exactly for cover-type functions, but the inversion itself is
    defined for any F.
    """
    table = to_explicit(F, cap)
    n = table.shape[0]
    full = n - 1
    h = table[full] - table[full ^ np.arange(n, dtype=np.int64)]
    return _kernels.mobius_transform(h)


def mobius_reconstruct(D) -> ExplicitFunction:
    """Rebuild the set-function from group weights (inverse of :func:`mobius`)."""
    D = np.ascontiguousarray(D, dtype=np.float64)
    z = _kernels.zeta_transform(D)
    n = z.shape[0]
    full = n - 1
    table = z[full] - z[full ^ np.arange(n, dtype=np.int64)]
    table[0] = 0.0
    return ExplicitFunction(table)
