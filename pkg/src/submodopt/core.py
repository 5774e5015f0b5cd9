"""Ground-set machinery, the set-function oracle type, and exhaustive checks.

Subsets of the ground set {0, ..., p-1} are plain int bitmasks: bit k set
means element k is in the subset.  Exhaustive operations materialize the
function as a table of 2**p values (see :func:`to_explicit`) and run the
bitmask kernels from ``_kernels`` over it; they refuse to run for p above
an explicit cap instead of silently enumerating forever.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Optional

import numpy as np

from . import _kernels
from .errors import CapExceeded, EmptySetNotZero

MAX_GROUND_SIZE = 63
EXHAUSTIVE_CAP = 20
DEFAULT_TOL = 1e-9


def validate_ground_size(p: int) -> int:
    p = int(p)
    if not 1 <= p <= MAX_GROUND_SIZE:
        raise ValueError(f"ground set size must be in [1, {MAX_GROUND_SIZE}], got {p}")
    return p


def check_cap(p: int, cap: int = EXHAUSTIVE_CAP) -> None:
    """Refuse exhaustive 2**p work beyond the cap."""
    if p > cap:
        raise CapExceeded(f"enumeration over 2**{p} subsets exceeds cap {cap}")


def subset_of(indices: Iterable[int]) -> int:
    """Bitmask of the given element indices."""
    mask = 0
    for k in indices:
        mask |= 1 << int(k)
    return mask


def elements_of(mask: int) -> list[int]:
    """Sorted element indices of a bitmask."""
    out = []
    k = 0
    while mask:
        if mask & 1:
            out.append(k)
        mask >>= 1
        k += 1
    return out


def complement(mask: int, p: int) -> int:
    return ((1 << p) - 1) ^ mask


def cardinality(mask: int) -> int:
    return int(mask).bit_count()


class SetFunction:
    """Evaluation oracle A -> F(A) over bitmask subsets, with F(empty) = 0.

    The oracle must be deterministic: repeated calls on the same mask return
    bit-identical values.  A nonzero value on the empty set is a construction
    error (wrap the raw oracle with :func:`shift_to_zero` if it needs
    normalizing); silent normalization would hide bugs in callers.

    Memoization is opt-in and keyed by the raw bitmask.  Instances are
    immutable after construction, so concurrent evaluation is safe: cache
    writes are idempotent because the oracle is deterministic.
    """

    __slots__ = ("p", "_fn", "_memo")

    def __init__(self, p: int, fn: Callable[[int], float], memoize: bool = False):
        self.p = validate_ground_size(p)
        self._fn = fn
        v0 = float(fn(0))
        if v0 != 0.0:
            raise EmptySetNotZero(
                f"F(empty) = {v0!r}; must be exactly 0 (see shift_to_zero)")
        self._memo: Optional[dict] = {0: 0.0} if memoize else None

    def __call__(self, mask: int) -> float:
        if not 0 <= mask < (1 << self.p):
            raise ValueError(f"subset mask {mask} out of range for p={self.p}")
        memo = self._memo
        if memo is None:
            return float(self._fn(mask))
        v = memo.get(mask)
        if v is None:
            v = float(self._fn(mask))
            memo[mask] = v
        return v

    @property
    def memoized(self) -> bool:
        return self._memo is not None


class ExplicitFunction(SetFunction):
    """Set-function backed by a full table of 2**p values."""

    __slots__ = ("table",)

    def __init__(self, values):
        table = np.ascontiguousarray(values, dtype=np.float64)
        n = table.shape[0]
        p = (n - 1).bit_length()
        if n != (1 << p) or n < 2:
            raise ValueError(f"table length {n} is not a power of two >= 2")
        self.table = table
        super().__init__(p, lambda m: table[m], memoize=False)


def explicit_function(values) -> ExplicitFunction:
    return ExplicitFunction(values)


def modular_function(s) -> SetFunction:
    """Modular function A -> sum of s[k] over k in A."""
    s = np.asarray(s, dtype=np.float64)
    sums = _kernels.subset_sums(s)
    return ExplicitFunction(sums)


def shift_to_zero(p: int, fn: Callable[[int], float], memoize: bool = False) -> SetFunction:
    """Wrap a raw oracle so the empty set maps to exactly zero."""
    off = float(fn(0))
    return SetFunction(p, lambda m: 0.0 if m == 0 else float(fn(m)) - off, memoize=memoize)


def to_explicit(F: SetFunction, cap: int = EXHAUSTIVE_CAP) -> np.ndarray:
    """Materialize F as a table indexed by bitmask; table[0] == 0."""
    if isinstance(F, ExplicitFunction):
        return F.table.copy()
    check_cap(F.p, cap)
    n = 1 << F.p
    table = np.empty(n, dtype=np.float64)
    for m in range(n):
        table[m] = F(m)
    return table


# ---------------------------------------------------------------------------
# property checks
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PropertyReport:
    """Outcome of an exhaustive property check.

    ``witness`` is None when the property holds; otherwise it is a dict
    locating one violation (inequality sides included) beyond tolerance.
    """

    holds: bool
    witness: Optional[dict] = None

    def __bool__(self) -> bool:
        return self.holds


def is_submodular(F: SetFunction, tol: float = DEFAULT_TOL,
                  cap: int = EXHAUSTIVE_CAP) -> PropertyReport:
    """Check all second-order differences F(A+k)-F(A) >= F(A+j+k)-F(A+j)."""
    table = to_explicit(F, cap)
    ok, m, j, k, lhs, rhs = _kernels.second_order_check(table, F.p, tol)
    if ok:
        return PropertyReport(True)
    return PropertyReport(False, {"A": int(m), "j": int(j), "k": int(k),
                                  "lhs": float(lhs), "rhs": float(rhs)})


def is_submodular_pairwise(F: SetFunction, tol: float = DEFAULT_TOL,
                           cap: int = EXHAUSTIVE_CAP) -> PropertyReport:
    """Check F(A)+F(B) >= F(A|B)+F(A&B) over all pairs (slower cross-check)."""
    table = to_explicit(F, cap)
    ok, a, b, lhs, rhs = _kernels.pairwise_check(table, F.p, tol, False)
    if ok:
        return PropertyReport(True)
    return PropertyReport(False, {"A": int(a), "B": int(b),
                                  "lhs": float(lhs), "rhs": float(rhs)})


def is_monotone(F: SetFunction, tol: float = DEFAULT_TOL,
                cap: int = EXHAUSTIVE_CAP) -> PropertyReport:
    """Check F(A+k) >= F(A) for every one-element addition."""
    table = to_explicit(F, cap)
    ok, m, k, lhs, rhs = _kernels.monotone_check(table, F.p, tol)
    if ok:
        return PropertyReport(True)
    return PropertyReport(False, {"A": int(m), "k": int(k),
                                  "lhs": float(lhs), "rhs": float(rhs)})


def is_symmetric(F: SetFunction, tol: float = DEFAULT_TOL,
                 cap: int = EXHAUSTIVE_CAP) -> PropertyReport:
    """Check F(A) == F(V - A) for every subset."""
    table = to_explicit(F, cap)
    ok, m, lhs, rhs = _kernels.symmetric_check(table, F.p, tol)
    if ok:
        return PropertyReport(True)
    return PropertyReport(False, {"A": int(m), "lhs": float(lhs), "rhs": float(rhs)})


def is_posimodular(F: SetFunction, tol: float = DEFAULT_TOL,
                   cap: int = EXHAUSTIVE_CAP) -> PropertyReport:
    """Check F(A)+F(B) >= F(A-B)+F(B-A) over all pairs."""
    table = to_explicit(F, cap)
    ok, a, b, lhs, rhs = _kernels.pairwise_check(table, F.p, tol, True)
    if ok:
        return PropertyReport(True)
    return PropertyReport(False, {"A": int(a), "B": int(b),
                                  "lhs": float(lhs), "rhs": float(rhs)})


# ---------------------------------------------------------------------------
# seeded random instances for tests and demos
# ---------------------------------------------------------------------------

_WEIGHT_GRID = 1 << 16  # weights are multiples of 2**-16 so sums stay exact


def _dyadic(rng, low: int, high: int, size=None):
    return rng.integers(low, high, size=size).astype(np.float64) / _WEIGHT_GRID


def random_submodular(seed: int, p: int, family: str = "cut") -> SetFunction:
    """Deterministic random submodular function from a named family.

    Families: ``cut`` (random directed graph cut), ``cover`` (weighted set
    cover), ``logdet`` (log-determinant of principal submatrices of a random
    positive definite matrix).  Append ``+modular`` to any of them to add a
    random modular shift, e.g. ``"cut+modular"``.

    Cut and cover weights live on a dyadic grid (multiples of 2**-16) so
    that table arithmetic downstream is exact in float64; logdet values are
    irrational by nature.
    """
    p = validate_ground_size(p)
    base, _, suffix = family.partition("+")
    if suffix not in ("", "modular"):
        raise ValueError(f"unknown family suffix {suffix!r}")
    rng = np.random.default_rng(seed)

    if base == "cut":
        pairs = [(i, j) for i in range(p) for j in range(p)
                 if i != j and rng.random() < 0.4]
        tails = np.array([i for i, _ in pairs], dtype=np.int64)
        heads = np.array([j for _, j in pairs], dtype=np.int64)
        wts = _dyadic(rng, 1, _WEIGHT_GRID, size=len(pairs))

        def fn(mask: int) -> float:
            inside_t = (mask >> tails) & 1
            inside_h = (mask >> heads) & 1
            return float(np.sum(wts[(inside_t == 1) & (inside_h == 0)]))

    elif base == "cover":
        n_groups = 2 * p
        masks = rng.integers(1, 1 << p, size=n_groups, dtype=np.uint64,
                             endpoint=(p == MAX_GROUND_SIZE))
        gw = _dyadic(rng, 0, _WEIGHT_GRID, size=n_groups)
        # singleton groups with positive weight keep F({k}) > 0 for every k
        masks = np.concatenate([masks, (1 << np.arange(p)).astype(np.uint64)])
        gw = np.concatenate([gw, _dyadic(rng, 1, 1 << 12, size=p)])

        def fn(mask: int) -> float:
            return float(np.sum(gw[(masks & np.uint64(mask)) != 0]))

    elif base == "logdet":
        r = rng.standard_normal((p, p)) * 0.5
        q = r @ r.T + np.eye(p)

        def fn(mask: int) -> float:
            if mask == 0:
                return 0.0
            idx = elements_of(mask)
            sub = q[np.ix_(idx, idx)]
            chol = np.linalg.cholesky(sub)
            return float(2.0 * np.sum(np.log(np.diag(chol))))

    else:
        raise ValueError(f"unknown family {base!r}")

    if suffix == "modular":
        shift = _dyadic(rng, -_WEIGHT_GRID, _WEIGHT_GRID, size=p)
        inner = fn

        def fn(mask: int) -> float:  # noqa: F811 - deliberate rewrap
            total = inner(mask)
            m = mask
            while m:
                low = m & -m
                total += shift[low.bit_length() - 1]
                m ^= low
            return total

    return SetFunction(p, fn, memoize=True)
