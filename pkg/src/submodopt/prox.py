"""Separable convex minimization against the Lovász extension.

Solves min_w f(w) + sum_j psi_j(w_j) for strictly convex differentiable
psi_j, equivalently the concave separable maximization of
-sum_j psi*_j(-s_j) over the base polytope.  Three routes are provided:

* ``prox_minnorm``: for quadratics the dual is a diagonal-metric projection
  onto the base polytope, solved by the minimum-norm-point method;
* ``prox_decomposition``: splits the ground set by one submodular
  minimization per level and recurses on restriction/contraction;
* ``prox_homotopy``: peels the coordinate blocks of the solution from the
  largest value down, each found by a scalar root search.

Threshold-set extraction, line search inside P(F), the P(F) and positive
P(F) variants, and separable optimality checks round out the toolbox.
Everything reduces to monotone scalar equations, solved by a safeguarded
bisection/secant iteration (bracket growth factor 2, 200-iteration cap).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

import numpy as np

from . import _kernels, transforms
from .core import (DEFAULT_TOL, EXHAUSTIVE_CAP, SetFunction, elements_of,
                   subset_of, to_explicit)
from .errors import (MonotonicityRequired, NoConvergence,
                     NumericalInconsistency, RecursionOverflow, Unbounded)
from .lovasz import lovasz_extension
from .polyhedra import exchangeable_pairs
from .sfm import min_norm_point, minimize

_ROOT_REL_TOL = 1e-12
_ROOT_MAX_ITER = 200


def solve_increasing(fn: Callable[[float], float], target: float,
                     x0: float = 0.0) -> float:
    """Root of fn(x) = target for a strictly increasing scalar fn.

    Brackets by doubling steps from x0, then closes in with a secant step
    safeguarded by bisection.  Raises NoConvergence past 200 iterations of
    either phase.
    """
    lo = hi = float(x0)
    flo = fhi = fn(x0) - target
    step = 1.0
    it = 0
    while flo > 0.0:
        lo -= step
        step *= 2.0
        flo = fn(lo) - target
        it += 1
        if it > _ROOT_MAX_ITER:
            raise NoConvergence(f"no lower bracket for target {target}")
    step = 1.0
    it = 0
    while fhi < 0.0:
        hi += step
        step *= 2.0
        fhi = fn(hi) - target
        it += 1
        if it > _ROOT_MAX_ITER:
            raise NoConvergence(f"no upper bracket for target {target}")
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    for _ in range(_ROOT_MAX_ITER):
        if hi - lo <= _ROOT_REL_TOL * (1.0 + abs(lo) + abs(hi)):
            break
        if fhi != flo:
            mid = lo - flo * (hi - lo) / (fhi - flo)  # secant
            if not lo < mid < hi:
                mid = 0.5 * (lo + hi)
        else:
            mid = 0.5 * (lo + hi)
        fmid = fn(mid) - target
        if fmid == 0.0:
            return mid
        if fmid < 0.0:
            lo, flo = mid, fmid
        else:
            hi, fhi = mid, fmid
    return 0.5 * (lo + hi)


class SeparableConvex:
    """Coordinatewise strictly convex differentiable penalty.

    Described by its derivative map; the inverse derivative (which is also
    the derivative of the Fenchel conjugate) defaults to scalar root
    finding, and the conjugate value is synthesized from ``value`` when not
    given.  Derivatives must be strictly increasing with full range, so
    every conjugate is finite on all of R; a grid check rejects obviously
    flat or saturating derivatives at construction.

    All callables are vectorized over the p coordinates.
    """

    def __init__(self, p: int,
                 deriv: Callable[[np.ndarray], np.ndarray],
                 inv_deriv: Optional[Callable[[np.ndarray], np.ndarray]] = None,
                 value: Optional[Callable[[np.ndarray], np.ndarray]] = None,
                 conj_value: Optional[Callable[[np.ndarray], np.ndarray]] = None,
                 validate: bool = True):
        self.p = int(p)
        self.deriv = deriv
        self.value = value
        self.inv_deriv = inv_deriv if inv_deriv is not None else self._invert
        if conj_value is not None:
            self.conj_value = conj_value
        elif value is not None:
            self.conj_value = self._conj_from_value
        else:
            self.conj_value = None
        if validate:
            self._validate()

    # conjugate derivative and inverse derivative coincide for smooth
    # strictly convex functions
    @property
    def conj_deriv(self):
        return self.inv_deriv

    def deriv_at(self, alpha: float) -> np.ndarray:
        """Vector of per-coordinate derivatives at the common point alpha."""
        return np.asarray(self.deriv(np.full(self.p, float(alpha))),
                          dtype=np.float64)

    def _invert(self, y) -> np.ndarray:
        y = np.asarray(y, dtype=np.float64)
        out = np.empty(self.p)
        for j in range(self.p):
            def fj(x, j=j):
                w = np.zeros(self.p)
                w[j] = x
                return float(self.deriv(w)[j])
            out[j] = solve_increasing(fj, float(y[j]))
        return out

    def _conj_from_value(self, y) -> np.ndarray:
        y = np.asarray(y, dtype=np.float64)
        x = self.inv_deriv(y)
        return y * x - np.asarray(self.value(x), dtype=np.float64)

    def _validate(self) -> None:
        grid = np.array([-2.0, -0.5, 0.0, 0.5, 2.0])
        prev = None
        for x in grid:
            d = self.deriv_at(x)
            if prev is not None and not np.all(d > prev):
                raise ValueError("derivative is not strictly increasing")
            prev = d
        # reject saturating derivatives (conjugate would not be finite);
        # overflow to inf at the outer probes is fine and expected
        with np.errstate(over="ignore"):
            lo2, lo1 = self.deriv_at(-1e4), self.deriv_at(-1e2)
            hi1, hi2 = self.deriv_at(1e2), self.deriv_at(1e4)
        if not (np.all(hi2 > hi1) and np.all(lo2 < lo1)):
            raise ValueError("derivative saturates; range must be all of R")
        probe = self.deriv_at(0.7)
        back = self.inv_deriv(probe)
        if np.any(np.abs(back - 0.7) > 1e-9 * (1.0 + np.abs(back))):
            raise ValueError("inverse derivative does not invert the derivative")

    def subset(self, idx: Sequence[int]) -> "SeparableConvex":
        """The penalty restricted to the given coordinates (new compact frame)."""
        idx = np.asarray(idx, dtype=np.int64)

        def lift(fn):
            if fn is None:
                return None

            def sub(x):
                full = np.zeros(self.p)
                full[idx] = np.asarray(x, dtype=np.float64)
                return np.asarray(fn(full), dtype=np.float64)[idx]

            return sub

        return SeparableConvex(len(idx), lift(self.deriv), lift(self.inv_deriv),
                               lift(self.value), lift(self.conj_value),
                               validate=False)


class Quadratic(SeparableConvex):
    """Weighted shifted quadratics psi_j(w) = a_j / 2 * (w - z_j)^2."""

    def __init__(self, a, z):
        a = np.asarray(a, dtype=np.float64)
        z = np.asarray(z, dtype=np.float64)
        if a.shape != z.shape or a.ndim != 1:
            raise ValueError("weights and centers must be 1-d of equal length")
        if np.any(a <= 0.0):
            raise ValueError("quadratic weights must be positive")
        self.a = a
        self.z = z
        super().__init__(
            len(a),
            deriv=lambda w: a * (np.asarray(w, dtype=np.float64) - z),
            inv_deriv=lambda y: z + np.asarray(y, dtype=np.float64) / a,
            value=lambda w: 0.5 * a * (np.asarray(w, dtype=np.float64) - z) ** 2,
            conj_value=lambda y: (lambda yy: yy * z + yy * yy / (2.0 * a))(
                np.asarray(y, dtype=np.float64)),
            validate=False)

    def subset(self, idx: Sequence[int]) -> "Quadratic":
        idx = np.asarray(idx, dtype=np.int64)
        return Quadratic(self.a[idx], self.z[idx])


@dataclass(frozen=True)
class ProxResult:
    """Primal-dual pair of the separable problem.

    ``u`` minimizes f(w) + sum psi_j(w_j); ``s`` is the matching dual base
    point with s_k = -psi'_k(u_k); the gap is primal minus dual value and
    is nonnegative up to solver accuracy.
    """

    u: np.ndarray
    s: np.ndarray
    primal_value: float
    dual_value: float
    gap: float


def prox_minnorm(F: SetFunction, q: Quadratic, eps: float = 1e-9) -> ProxResult:
    """Quadratic-penalty solve through the minimum-norm-point method.

    The dual becomes min over B(F) of sum (s_j - a_j z_j)^2 / (2 a_j),
    a projection in the diagonal metric 1/a onto the base polytope.
    """
    if q.p != F.p:
        raise ValueError("penalty dimension does not match the ground set")
    s, _ = min_norm_point(F, weights=1.0 / q.a, center=q.a * q.z, eps=eps)
    u = q.z - s / q.a
    primal = lovasz_extension(F, u) + float(np.sum(q.value(u)))
    dual = -float(np.sum(q.conj_value(-s)))
    return ProxResult(u=u, s=s, primal_value=primal, dual_value=dual,
                      gap=primal - dual)


def prox_threshold_sets(u, alpha: float, tau: float = 1e-9) -> tuple[int, int]:
    """Minimal and maximal minimizers of F + psi'(alpha) from the prox solution.

    The exact sets are {u > alpha} and {u >= alpha}; ``tau`` guards against
    solver noise in u.
    """
    u = np.asarray(u, dtype=np.float64)
    minimal = subset_of(np.nonzero(u > alpha + tau)[0])
    maximal = subset_of(np.nonzero(u >= alpha - tau)[0])
    return minimal, maximal


def _equalized_start(F: SetFunction, psi: SeparableConvex) -> np.ndarray:
    """The sum-constrained minimizer of the dual objective: t with t(V) = F(V).

    Minimizing sum_j psi*_j(-t_j) subject to the sum constraint equalizes
    the dual derivatives, i.e. t_j = -psi'_j(nu) for a common scalar nu
    (for uniform quadratic weights this reduces to equal t_j - z_j).
    """
    fv = F((1 << F.p) - 1)
    if isinstance(psi, Quadratic):
        nu = (float(np.sum(psi.a * psi.z)) - fv) / float(np.sum(psi.a))
        return psi.a * psi.z - psi.a * nu
    nu = solve_increasing(lambda m: float(np.sum(psi.deriv_at(m))), -fv)
    return -psi.deriv_at(nu)


def prox_decomposition(F: SetFunction, psi: SeparableConvex,
                       sfm_backend: str = "minnorm", eps: float = 1e-9,
                       depth_limit: Optional[int] = None) -> np.ndarray:
    """Dual-optimal base point by recursive ground-set splitting.

    Equalize the derivatives subject to t(V) = F(V); if the largest
    minimizer of F - t is the whole ground set, t is optimal, otherwise
    solve the restriction and the contraction independently and concatenate.
    Each level removes at least one element, so recursion deeper than p
    levels is an internal bug, reported as RecursionOverflow.
    """
    if psi.p != F.p:
        raise ValueError("penalty dimension does not match the ground set")
    if depth_limit is None:
        depth_limit = F.p + 1

    def solve(Fc: SetFunction, pc: SeparableConvex, depth: int) -> np.ndarray:
        if depth > depth_limit:
            raise RecursionOverflow(f"decomposition depth {depth} exceeds limit")
        t = _equalized_start(Fc, pc)
        full = (1 << Fc.p) - 1
        shifted = transforms.add_modular(Fc, -t)
        res = minimize(shifted, backend=sfm_backend, eps=eps)
        a_mask = res.maximal_minimizer
        if a_mask == full:
            return t
        rest_f = transforms.restrict(Fc, a_mask)
        cont_f = transforms.contract(Fc, a_mask)
        s = np.empty(Fc.p)
        s[list(rest_f.elements)] = solve(rest_f, pc.subset(rest_f.elements),
                                         depth + 1)
        s[list(cont_f.elements)] = solve(cont_f, pc.subset(cont_f.elements),
                                         depth + 1)
        return s

    return solve(F, psi, 1)


def _maximal_tight_set(F: SetFunction, psi: SeparableConvex, alpha: float,
                       backend: str, eps: float, fallback_mask: int,
                       tol: float) -> int:
    """Largest minimizer of F + psi'(alpha), unioned with a known tight set."""
    shifted = transforms.add_modular(F, psi.deriv_at(alpha))
    res = minimize(shifted, backend=backend, eps=eps)
    mask = res.maximal_minimizer | fallback_mask
    if shifted(mask) > tol:
        raise NumericalInconsistency(
            f"peel set value {shifted(mask):.3e} exceeds tolerance {tol:.3e}")
    return mask


def prox_homotopy(F: SetFunction, psi: SeparableConvex,
                  sfm_backend: str = "minnorm", eps: float = 1e-9) -> np.ndarray:
    """Primal prox solution by peeling level sets from the top value down.

    For each remaining block, find the smallest alpha at which
    g(alpha) = min_A F(A) + psi'(alpha)(A) reaches zero (secant iteration on
    the current minimizer), fix u = alpha on the maximal tight set, and
    recurse on the contraction by it.
    """
    if psi.p != F.p:
        raise ValueError("penalty dimension does not match the ground set")
    u = np.zeros(F.p)
    frame = list(range(F.p))
    cur_f, cur_psi = F, psi

    for _ in range(F.p):
        p = cur_f.p
        full = (1 << p) - 1
        singles = np.array([cur_f(1 << k) for k in range(p)])
        tol = 1e-9 * (1.0 + float(np.max(np.abs(singles))))
        starts = cur_psi.inv_deriv(-singles)
        alpha = float(np.min(starts))
        last_tight = 1 << int(np.argmin(starts))

        for _ in range(_ROOT_MAX_ITER):
            shifted = transforms.add_modular(cur_f, cur_psi.deriv_at(alpha))
            res = minimize(shifted, backend=sfm_backend, eps=eps)
            if res.min_value >= -tol:
                break
            a_mask = res.maximal_minimizer
            idx = elements_of(a_mask)
            target = -cur_f(a_mask)
            alpha = solve_increasing(
                lambda x: float(np.sum(cur_psi.deriv_at(x)[idx])), target,
                x0=alpha)
            last_tight = a_mask
        else:
            raise NoConvergence("homotopy root search exceeded iteration cap")

        peel = _maximal_tight_set(cur_f, cur_psi, alpha, sfm_backend, eps,
                                  last_tight, 10.0 * tol)
        for k in elements_of(peel):
            u[frame[k]] = alpha
        if peel == full:
            return u
        # the peeled block is tight for the dual base, so the remaining
        # coordinates solve the problem contracted by it
        rest = transforms.contract(cur_f, peel)
        frame = [frame[e] for e in rest.elements]
        cur_psi = cur_psi.subset(rest.elements)
        cur_f = rest
    raise RecursionOverflow("homotopy peeled more than p blocks")


def line_search_P(F: SetFunction, s0, t, tol: float = DEFAULT_TOL,
                  cap: int = EXHAUSTIVE_CAP) -> float:
    """Largest lambda >= 0 with s0 + lambda * t inside P(F).

    Reduces to the submodular nonnegative function F - s0 and walks the
    piecewise-affine g(lambda) = min_A F(A) - s0(A) - lambda t(A) down to
    its zero by secant steps on the current minimizer.  Directions without
    a strictly positive coordinate never leave the polyhedron: Unbounded.
    """
    s0 = np.asarray(s0, dtype=np.float64)
    t = np.asarray(t, dtype=np.float64)
    if s0.shape != (F.p,) or t.shape != (F.p,):
        raise ValueError("start and direction must have length p")
    if not np.any(t > 0.0):
        raise Unbounded("direction has no positive coordinate")
    table = to_explicit(F, cap) - _kernels.subset_sums(s0)
    tsums = _kernels.subset_sums(t)

    pos = t > 0.0
    singles = table[np.left_shift(1, np.nonzero(pos)[0])]
    lam_up = float(np.min(singles / t[pos]))
    if lam_up <= 0.0:
        return 0.0

    lam = (1.0 + 1e-6) * lam_up

    def g(l):
        return _kernels.argmin_extremes(table - l * tsums)

    gval, _, omask = g(lam)
    if gval >= -tol:
        return lam_up
    for _ in range(_ROOT_MAX_ITER):
        # the maximal minimizer keeps t(A) > 0 whenever g < 0
        lam = float(table[omask] / tsums[omask])
        gval, _, omask = g(lam)
        if gval >= -tol:
            return lam
    raise NoConvergence("line search secant exceeded iteration cap")


def _base_pair(F: SetFunction, psi: SeparableConvex, eps: float,
               sfm_backend: str) -> tuple[np.ndarray, np.ndarray]:
    """Primal-dual solution (v, t) of the base-polytope problem."""
    if isinstance(psi, Quadratic):
        pr = prox_minnorm(F, psi, eps=eps)
        return pr.u, pr.s
    t = prox_decomposition(F, psi, sfm_backend=sfm_backend, eps=eps)
    v = psi.inv_deriv(-t)
    return v, t


def prox_over_P(F: SetFunction, psi: SeparableConvex, eps: float = 1e-9,
                sfm_backend: str = "minnorm") -> tuple[np.ndarray, np.ndarray]:
    """Separable minimization with the dual ranging over all of P(F).

    From the base-polytope pair (v, t): the primal is the positive part of
    v, and each dual coordinate is the unconstrained maximizer of
    -psi*_k(-s) capped at t_k.
    """
    v, t = _base_pair(F, psi, eps, sfm_backend)
    unconstrained = -psi.deriv_at(0.0)
    return np.maximum(v, 0.0) + 0.0, np.minimum(t, unconstrained) + 0.0


def prox_over_P_plus(F: SetFunction, psi: SeparableConvex, eps: float = 1e-9,
                     sfm_backend: str = "minnorm") -> tuple[np.ndarray, np.ndarray]:
    """Variant over the positive polyhedron; F must be non-decreasing.

    Dual coordinates clip the unconstrained maximizer into [0, t_k]; the
    primal solves s_k + psi'_k(w_k) = 0.  A sampled monotonicity spot-check
    guards the precondition (not exhaustive).
    """
    rng = np.random.default_rng(0)
    full = (1 << F.p) - 1
    for _ in range(min(4 * F.p, 64)):
        m = int(rng.integers(0, full + 1))
        k = int(rng.integers(0, F.p))
        if F(int(m | (1 << k))) < F(m) - 1e-9:
            raise MonotonicityRequired(
                f"F decreases when adding {k} to mask {m}")
    v, t = _base_pair(F, psi, eps, sfm_backend)
    unconstrained = -psi.deriv_at(0.0)
    s = np.minimum(np.maximum(unconstrained, 0.0), np.maximum(t, 0.0)) + 0.0
    w = psi.inv_deriv(-s)
    return w, s


DerivativeSpec = Union[SeparableConvex, Callable, Sequence[Callable]]


def _derivative_values(g: DerivativeSpec, s: np.ndarray) -> np.ndarray:
    if isinstance(g, SeparableConvex):
        return np.asarray(g.deriv(s), dtype=np.float64)
    if callable(g):
        return np.asarray(g(s), dtype=np.float64)
    return np.array([float(gj(sj)) for gj, sj in zip(g, s)])


def check_separable_optimality(F: SetFunction, s, g: DerivativeSpec,
                               tol: float = 1e-8,
                               tight_tol: float = 1e-8,
                               cap: int = EXHAUSTIVE_CAP) -> bool:
    """Whether a base s minimizes sum_j g_j(s_j) over the base polytope.

    Primary form: g'_k(s_k) >= g'_q(s_q) for every exchangeable pair (k, q).
    The equivalent level-set form (every lower level set of g'(s) tight) is
    computed as well; disagreement raises NumericalInconsistency.

    ``g`` may be a SeparableConvex, a vectorized derivative callable, or a
    list of scalar derivative callables.
    """
    s = np.asarray(s, dtype=np.float64)
    w = _derivative_values(g, s)

    ok_pairs = True
    for k, q in exchangeable_pairs(F, s, tight_tol, cap):
        if w[k] < w[q] - tol:
            ok_pairs = False
            break

    # level-set form: cluster the derivative values, check prefixes tight
    order = np.argsort(w, kind="stable")
    clusters: list[list[int]] = [[int(order[0])]]
    for j in order[1:]:
        if w[j] - w[clusters[-1][-1]] > tol:
            clusters.append([])
        clusters[-1].append(int(j))
    ok_levels = True
    mask = 0
    acc = 0.0
    for cl in clusters[:-1]:  # the final prefix is V, always tight for a base
        for j in cl:
            mask |= 1 << j
            acc += s[j]
        if abs(acc - F(mask)) > max(tol, tight_tol):
            ok_levels = False
            break

    if ok_pairs != ok_levels:
        raise NumericalInconsistency(
            f"exchange form says {ok_pairs}, level-set form says {ok_levels}")
    return ok_pairs


def lex_compare(s1, s2, g: Optional[DerivativeSpec] = None) -> int:
    """Order two vectors by the sorted sequence of their derivative values.

    Sorts g'(s) increasingly and compares lexicographically; returns -1, 0,
    or 1.  The identity derivative is used when g is None.
    """
    s1 = np.asarray(s1, dtype=np.float64)
    s2 = np.asarray(s2, dtype=np.float64)
    w1 = s1 if g is None else _derivative_values(g, s1)
    w2 = s2 if g is None else _derivative_values(g, s2)
    t1 = np.sort(w1)
    t2 = np.sort(w2)
    for a, b in zip(t1, t2):
        if a < b:
            return -1
        if a > b:
            return 1
    return 0
