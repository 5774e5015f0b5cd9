"""Proximal solvers, threshold sets, line search, optimality checks."""

import numpy as np
import pytest

import submodopt as so
from submodopt.errors import RecursionOverflow, Unbounded
from submodopt.prox import SeparableConvex, solve_increasing

from helpers import batch_subset_sums

F_OR = so.explicit_function([0.0, 1.0, 1.0, 1.0])
SYM_CUT2 = so.explicit_function([0.0, 1.0, 1.0, 0.0])


def quad(p, a=None, z=None):
    a = np.ones(p) if a is None else np.asarray(a, dtype=float)
    z = np.zeros(p) if z is None else np.asarray(z, dtype=float)
    return so.Quadratic(a, z)


def cosh_penalty(p):
    """Non-quadratic strictly convex family: psi(w) = cosh(w) - 1."""
    return SeparableConvex(
        p,
        deriv=lambda w: np.sinh(w),
        inv_deriv=lambda y: np.arcsinh(y),
        value=lambda w: np.cosh(w) - 1.0,
        conj_value=lambda y: y * np.arcsinh(y) - np.sqrt(1.0 + y * y) + 1.0)


def test_solve_increasing():
    assert solve_increasing(lambda x: x ** 3, 8.0) == pytest.approx(2.0, abs=1e-10)
    assert solve_increasing(lambda x: x, 0.0) == 0.0
    assert solve_increasing(np.arcsinh, -2.5, x0=10.0) == pytest.approx(
        np.sinh(-2.5), rel=1e-10)


def test_separable_convex_validation():
    with pytest.raises(ValueError):
        SeparableConvex(2, deriv=lambda w: np.tanh(w))  # saturates
    with pytest.raises(ValueError):
        SeparableConvex(2, deriv=lambda w: -w)  # decreasing
    pen = cosh_penalty(3)
    y = pen.deriv(np.array([0.3, -1.0, 2.0]))
    assert np.allclose(pen.inv_deriv(y), [0.3, -1.0, 2.0], atol=1e-9)
    assert pen.conj_deriv is pen.inv_deriv


def test_separable_default_inversion():
    pen = SeparableConvex(2, deriv=lambda w: np.sinh(w),
                          value=lambda w: np.cosh(w) - 1.0)
    y = np.array([1.5, -0.25])
    assert np.allclose(pen.inv_deriv(y), np.arcsinh(y), atol=1e-9)
    ref = cosh_penalty(2)
    assert np.allclose(pen.conj_value(y), ref.conj_value(y), atol=1e-9)


def test_prox_minnorm_examples():
    pr = so.prox_minnorm(F_OR, quad(2))
    assert np.allclose(pr.u, [-0.5, -0.5], atol=1e-9)
    assert np.allclose(pr.s, [0.5, 0.5], atol=1e-9)
    assert -1e-9 <= pr.gap <= 1e-6

    t = np.array([0.8, -0.3])
    pr2 = so.prox_minnorm(so.modular_function(t), quad(2))
    assert np.allclose(pr2.u, -t, atol=1e-9)
    assert np.allclose(pr2.s, t, atol=1e-9)

    pr3 = so.prox_minnorm(SYM_CUT2, quad(2, z=[1.0, -1.0]))
    assert np.allclose(pr3.s, [1.0, -1.0], atol=1e-9)
    assert np.allclose(pr3.u, [0.0, 0.0], atol=1e-9)
    # the dual pairing holds coordinatewise
    assert np.allclose(pr3.s, -(pr3.u - np.array([1.0, -1.0])), atol=1e-9)


def test_prox_threshold_examples():
    u = np.array([-0.5, -0.5])
    assert so.prox_threshold_sets(u, -0.6) == (0b11, 0b11)
    assert so.prox_threshold_sets(u, 0.0) == (0, 0)
    assert so.prox_threshold_sets(u, -0.5) == (0, 0b11)


def test_prox_decomposition_examples():
    assert np.allclose(so.prox_decomposition(F_OR, quad(2)), [0.5, 0.5],
                       atol=1e-9)
    t = np.array([1.1, -0.4, 0.2])
    assert np.allclose(so.prox_decomposition(so.modular_function(t),
                                             cosh_penalty(3)), t, atol=1e-9)
    # derivative equalization, not value equalization: the centered case
    s = so.prox_decomposition(SYM_CUT2, quad(2, z=[1.0, -1.0]))
    assert np.allclose(s, [1.0, -1.0], atol=1e-9)


def test_prox_homotopy_examples():
    assert np.allclose(so.prox_homotopy(F_OR, quad(2)), [-0.5, -0.5], atol=1e-9)
    t = np.array([1.0, 2.0])
    assert np.allclose(so.prox_homotopy(so.modular_function(t), quad(2)), -t,
                       atol=1e-9)
    assert np.allclose(so.prox_homotopy(F_OR, quad(2, z=[5.0, 5.0])),
                       [4.5, 4.5], atol=1e-9)


def test_solver_agreement_random():
    rng = np.random.default_rng(0)
    for seed in range(25):
        p = 4 + seed % 4
        F = so.random_submodular(seed, p, ("cut+modular", "cover", "logdet")[seed % 3])
        a = np.exp(rng.uniform(-1, 1, p))
        z = rng.standard_normal(p)
        q = so.Quadratic(a, z)
        pr = so.prox_minnorm(F, q, eps=1e-11)
        s_dec = so.prox_decomposition(F, q)
        u_hom = so.prox_homotopy(F, q)
        assert np.max(np.abs(pr.s - s_dec)) <= 1e-6
        assert np.max(np.abs(pr.u - u_hom)) <= 1e-6
        assert -1e-9 <= pr.gap <= 1e-6
        assert np.allclose(pr.s, -a * (pr.u - z), atol=1e-6)


def test_solvers_accept_brute_backend():
    F = so.random_submodular(11, 5, "cut+modular")
    rng = np.random.default_rng(11)
    q = so.Quadratic(np.exp(rng.uniform(-1, 1, 5)), rng.standard_normal(5))
    pr = so.prox_minnorm(F, q, eps=1e-11)
    s_dec = so.prox_decomposition(F, q, sfm_backend="brute")
    u_hom = so.prox_homotopy(F, q, sfm_backend="brute")
    assert np.max(np.abs(pr.s - s_dec)) <= 1e-6
    assert np.max(np.abs(pr.u - u_hom)) <= 1e-6


def test_generic_penalty_solvers_agree():
    for seed in range(5):
        F = so.random_submodular(seed, 5, "cut+modular")
        pen = cosh_penalty(5)
        s = so.prox_decomposition(F, pen)
        u = so.prox_homotopy(F, pen)
        assert np.allclose(pen.inv_deriv(-s), u, atol=1e-6)
        assert so.in_B(F, s, tol=1e-7)
        assert so.check_separable_optimality(
            F, s, lambda x: -pen.inv_deriv(-x), tol=1e-6, tight_tol=1e-6)


def test_threshold_monotonicity_and_equivalence():
    for seed in range(5):
        p = 5
        F = so.random_submodular(seed, p, "cut+modular")
        q = quad(p)
        pr = so.prox_minnorm(F, q, eps=1e-11)
        table = so.to_explicit(F)
        ones = batch_subset_sums(np.ones((1, p)))[0]
        grid = np.linspace(pr.u.min() - 1.0, pr.u.max() + 1.0, 400)
        prev_max = None
        recon = np.full(p, grid[0] - 1.0)
        for alpha in grid:
            shifted = table + alpha * ones
            vmin = shifted.min()
            argmins = np.nonzero(shifted <= vmin + 1e-12)[0]
            lo = int(np.bitwise_and.reduce(argmins))
            hi = int(np.bitwise_or.reduce(argmins))
            strict, loose = so.prox_threshold_sets(pr.u, alpha, tau=1e-7)
            assert strict & ~hi == 0  # {u > a} inside the maximal minimizer
            assert lo & ~loose == 0   # minimal minimizer inside {u >= a}
            if prev_max is not None:
                assert hi & ~prev_max == 0  # nested as alpha grows
            prev_max = hi
            for k in so.elements_of(hi):
                recon[k] = max(recon[k], alpha)
        # reconstructing u from the grid of maximal minimizers
        step = grid[1] - grid[0]
        assert np.max(np.abs(recon - pr.u)) <= step + 1e-6


def test_line_search_examples():
    assert so.line_search_P(F_OR, np.zeros(2), [1.0, 1.0]) == pytest.approx(
        0.5, abs=1e-9)
    assert so.line_search_P(F_OR, np.zeros(2), [1.0, 0.0]) == pytest.approx(
        1.0, abs=1e-9)
    with pytest.raises(Unbounded):
        so.line_search_P(F_OR, np.zeros(2), [-1.0, -1.0])


def test_line_search_random():
    rng = np.random.default_rng(2)
    for seed in range(20):
        p = 5
        F = so.random_submodular(seed, p, "cover")
        t = rng.standard_normal(p)
        t[rng.integers(0, p)] = abs(rng.standard_normal()) + 0.1
        lam = so.line_search_P(F, np.zeros(p), t)
        table = so.to_explicit(F)
        tsums = batch_subset_sums(t[None, :])[0]
        pos = tsums > 0
        ref = float(np.min(table[pos] / tsums[pos]))
        assert lam == pytest.approx(ref, abs=1e-9)
        assert so.in_P(F, lam * t, tol=1e-9)
        assert not so.in_P(F, (lam + 1e-4 * max(1.0, lam)) * t, tol=1e-9)


def test_line_search_from_interior_point():
    F = so.random_submodular(3, 5, "cover")
    rng = np.random.default_rng(3)
    s0 = so.greedy_base(F, rng.standard_normal(5)) - 0.25
    assert so.in_P(F, s0)
    t = np.abs(rng.standard_normal(5)) + 0.05
    lam = so.line_search_P(F, s0, t)
    assert so.in_P(F, s0 + lam * t, tol=1e-9)
    assert not so.in_P(F, s0 + (lam + 1e-4 * max(1.0, lam)) * t, tol=1e-9)


def test_prox_over_P_examples():
    w, s = so.prox_over_P(F_OR, quad(2))
    assert np.allclose(w, [0.0, 0.0]) and np.allclose(s, [0.0, 0.0])
    w2, s2 = so.prox_over_P(so.modular_function([1.0, -1.0]), quad(2))
    assert np.allclose(w2, [0.0, 1.0]) and np.allclose(s2, [0.0, -1.0])
    w3, s3 = so.prox_over_P(F_OR, quad(2, z=[2.0, 2.0]))
    assert np.allclose(s3, [0.5, 0.5], atol=1e-9)
    assert np.allclose(w3, [1.5, 1.5], atol=1e-9)


def test_prox_over_P_consistency():
    rng = np.random.default_rng(4)
    for seed in range(8):
        p = 5
        F = so.random_submodular(seed, p, "cut+modular")
        q = so.Quadratic(np.exp(rng.uniform(-1, 1, p)), rng.standard_normal(p))
        w, s = so.prox_over_P(F, q, eps=1e-11)
        assert so.in_P(F, s, tol=1e-7)
        assert float(w @ s) == pytest.approx(so.lovasz_extension(F, w), abs=1e-7)
        fenchel = w * s + q.value(w) + q.conj_value(-s)
        assert np.max(np.abs(fenchel)) <= 1e-8


def test_prox_over_P_plus_examples():
    w, s = so.prox_over_P_plus(F_OR, quad(2))
    assert np.allclose(w, [0.0, 0.0]) and np.allclose(s, [0.0, 0.0])
    w2, s2 = so.prox_over_P_plus(F_OR, quad(2, z=[1.0, 1.0]))
    assert np.allclose(s2, [0.5, 0.5], atol=1e-9)
    assert np.allclose(w2, [0.5, 0.5], atol=1e-9)
    one = so.explicit_function([0.0, 1.0])
    w3, s3 = so.prox_over_P_plus(one, quad(1, z=[-3.0]))
    assert np.allclose(s3, [0.0]) and np.allclose(w3, [-3.0])


def test_prox_over_P_plus_objective_on_grid():
    # check against a brute grid search of min f(w_+) + sum psi
    F = so.random_submodular(1, 2, "cover")
    q = quad(2, z=[0.6, 1.4])
    w, s = so.prox_over_P_plus(F, q, eps=1e-11)
    obj = so.lovasz_extension(F, np.maximum(w, 0.0)) + float(np.sum(q.value(w)))
    grid = np.linspace(-2.0, 2.0, 161)
    best = min(
        so.lovasz_extension(F, np.maximum([a, b], 0.0))
        + float(np.sum(q.value(np.array([a, b]))))
        for a in grid for b in grid)
    assert obj <= best + 1e-6


def test_prox_over_P_plus_requires_monotone():
    from submodopt.errors import MonotonicityRequired
    dec = so.explicit_function([0.0, 1.0, -1.0, 0.5])
    with pytest.raises(MonotonicityRequired):
        so.prox_over_P_plus(dec, quad(2))


def test_check_separable_optimality_examples():
    assert so.check_separable_optimality(F_OR, [0.5, 0.5], quad(2))
    assert not so.check_separable_optimality(F_OR, [1.0, 0.0], quad(2))
    t = so.modular_function([0.2, -0.9])
    assert so.check_separable_optimality(t, [0.2, -0.9], cosh_penalty(2))


def test_lex_compare_examples():
    assert so.lex_compare([0.5, 0.5], [0.5, 0.5]) == 0
    assert so.lex_compare([0.5, 0.5], [1.0, 0.0]) == 1
    assert so.lex_compare([0.0, 1.0], [1.0, 0.0]) == 0


def test_lex_optimality_of_prox_solution():
    rng = np.random.default_rng(5)
    for seed in range(5):
        p = 5
        F = so.random_submodular(seed, p, "cut+modular")
        z = rng.standard_normal(p)
        q = so.Quadratic(np.ones(p), z)
        pr = so.prox_minnorm(F, q, eps=1e-11)
        deriv = lambda s: s - z  # derivative of the dual objective
        for _ in range(100):
            other = so.greedy_base(F, rng.standard_normal(p))
            assert so.lex_compare(pr.s, other, deriv) >= 0


def test_decomposition_depth_guard():
    with pytest.raises(RecursionOverflow):
        so.prox_decomposition(F_OR, quad(2), depth_limit=0)
