import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from hybridhyper.analysis import (
    H_term,
    J_term,
    K_of_f,
    decompose,
    discrete_inner,
    discrete_norm,
    l2_error,
    lambda_schedule,
    noise_coefficients,
    sparsity,
)
from hybridhyper.basis import build_basis, evaluate_basis, vandermonde
from hybridhyper.estimators import (
    EstimateCoefficients,
    FilterFunction,
    RegularizationParams,
    SampleVector,
    Variant,
    estimate,
    hyper_coefficients,
)
from hybridhyper.quadrature import DISK, INTERVAL, disk_polar_rule, gauss_legendre

coef = arrays(np.float64, st.integers(1, 60), elements=st.floats(-5, 5, allow_nan=False))


@pytest.fixture(scope="module")
def disk8():
    rule = disk_polar_rule(8)
    basis = build_basis(DISK, 8, rule)
    return rule, basis, vandermonde(basis, rule), FilterFunction.for_basis(basis)


def test_schedule_example():
    s = lambda_schedule([3.0, -1.0, 2.0])
    assert list(s.zeta) == [3.0, 2.0, 1.0]
    assert s(2) == 2.0 and len(s) == 3
    with pytest.raises(IndexError):
        s(0)
    with pytest.raises(IndexError):
        s(4)


def test_schedule_constant():
    assert np.all(lambda_schedule([-2.0, 2.0, 2.0, -2.0]).zeta == 2.0)


@settings(max_examples=200, deadline=None)
@given(alpha=coef)
def test_schedule_is_sorted_abs_multiset(alpha):
    z = lambda_schedule(alpha).zeta
    assert np.all(np.diff(z) <= 0) and z[-1] >= 0
    assert np.array_equal(np.sort(z), np.sort(np.abs(alpha)))


@settings(max_examples=300, deadline=None)
@given(alpha=coef, seed=st.integers(0, 2**32 - 1), data=st.data())
def test_sparsity_bound_and_J_ordering(alpha, seed, data):
    sched = lambda_schedule(alpha)
    s = data.draw(st.integers(1, len(alpha)))
    deg = np.random.default_rng(seed).integers(0, 9, len(alpha))
    f = FilterFunction.for_degrees(deg, 8)
    p = RegularizationParams(sched(s))
    beta, gamma, nu = (estimate(v, alpha, p, f) for v in ("hybrid", "lasso", "hard"))
    for z in (beta, gamma, nu):
        assert sparsity(z) <= s - 1
    tol = 1e-12 * (1 + float(alpha @ alpha))
    assert J_term(nu, alpha) <= J_term(gamma, alpha) + tol
    assert J_term(gamma, alpha) <= J_term(beta, alpha) + tol
    assert J_term(beta, alpha) <= tol


def test_sparsity_examples():
    assert sparsity(np.zeros(5)) == 0
    alpha = np.array([0.3, -2.0, 1.0])
    f = FilterFunction.for_degrees([0, 1, 1], 2)
    assert estimate("hybrid", alpha, RegularizationParams(lambda_schedule(alpha)(1)), f).sparsity == 0


def test_J_examples():
    alpha = np.array([1.0, -2.0, 0.5])
    assert J_term(np.zeros(3), alpha) == 0.0
    assert J_term(alpha, alpha) == pytest.approx(-float(alpha @ alpha))
    with pytest.raises(ValueError):
        J_term(np.zeros(2), alpha)


def test_J_nonincreasing_in_s():
    rng = np.random.default_rng(9)
    alpha = rng.standard_normal(80)
    f = FilterFunction.for_degrees(np.repeat(np.arange(16), 5), 16)
    sched = lambda_schedule(alpha)
    for v in ("hybrid", "lasso", "hard"):
        J = [J_term(estimate(v, alpha, RegularizationParams(sched(s)), f), alpha) for s in range(1, 81)]
        assert np.all(np.diff(J) <= 1e-12)


def test_H_examples(disk8):
    rule, basis, V, _ = disk8
    eps = np.random.default_rng(0).standard_normal(len(rule))
    assert H_term(np.ones(basis.d), np.zeros(len(rule)), V) == 0.0
    assert H_term(np.zeros(basis.d), eps, V) == 0.0
    with pytest.raises(ValueError):
        H_term(np.ones(basis.d), None, V)
    z = np.random.default_rng(1).standard_normal(basis.d)
    direct = 2 * sum(z[l] * sum(rule.weights[j] * eps[j] * V.values[j, l] for j in range(len(rule))) for l in range(basis.d))
    assert H_term(z, eps, V) == pytest.approx(direct, rel=1e-10)


def test_decomposition_random(disk8):
    rule, basis, V, f = disk8
    rng = np.random.default_rng(3)
    x, y = rule.nodes.T
    clean = np.cos(2 * x) * np.exp(y)
    for _ in range(20):
        s = SampleVector.contaminate(clean, 0.3 * rng.standard_normal(len(rule)))
        alpha = hyper_coefficients(s, V)
        sched = lambda_schedule(alpha)
        for v in ("hybrid", "lasso", "hard", "plain", "tikhonov", "filtered"):
            est = estimate(v, alpha, RegularizationParams(sched(int(rng.integers(1, basis.d + 1)))), f)
            t = decompose(est, alpha, s, V)
            assert t.residual <= 1e-9 * (1 + t.const)
            assert t.H == pytest.approx(t.direct - t.J - t.const, abs=1e-9 * (1 + t.const))


def test_decomposition_noise_free_plain(disk8):
    rule, basis, V, f = disk8
    clean = np.sin(rule.nodes[:, 0] + 2 * rule.nodes[:, 1])
    s = SampleVector.contaminate(clean, np.zeros(len(rule)))
    alpha = hyper_coefficients(s, V)
    t = decompose(estimate("plain", alpha, RegularizationParams(), f), alpha, s, V)
    norm2 = float(alpha @ alpha)
    assert t.H == 0.0
    assert t.J == pytest.approx(-norm2, rel=1e-14)
    assert t.direct == pytest.approx(t.const - norm2, abs=1e-12)


def test_decomposition_zero_estimate(disk8):
    rule, basis, V, f = disk8
    clean = np.cos(rule.nodes[:, 1])
    s = SampleVector.contaminate(clean, np.random.default_rng(0).standard_normal(len(rule)))
    t = decompose(np.zeros(basis.d), hyper_coefficients(s, V), s, V)
    assert t.J == 0.0 and t.H == 0.0
    assert t.direct == pytest.approx(t.const, rel=1e-14)


def test_decompose_needs_noise(disk8):
    rule, basis, V, _ = disk8
    with pytest.raises(ValueError):
        decompose(np.zeros(basis.d), np.zeros(basis.d), SampleVector(np.ones(len(rule))), V)


# ---------------------------------------------------------------------------
# K(f)


def test_K_vanishes_for_large_lambda_and_trivial_filter():
    alpha = np.array([0.4, -1.0, 0.2])
    f = FilterFunction.for_degrees([0, 1, 2], 4)
    assert K_of_f(alpha, RegularizationParams(1.0), f) == 0.0
    ones = FilterFunction.for_degrees([0, 0, 0], 4)
    assert K_of_f(alpha, RegularizationParams(0.0), ones) == 0.0


def _k_terms(values, V, rule, basis, filt, params):
    alpha = hyper_coefficients(values, V)
    Hf = evaluate_basis(basis, rule.nodes) @ estimate("hybrid", alpha, params, filt).coeffs
    K = K_of_f(alpha, params, filt)
    r = values - Hf
    return K, discrete_inner(r, Hf, rule), discrete_inner(Hf, Hf, rule), discrete_inner(r, r, rule), discrete_inner(values, values, rule)


def test_k_identities(disk8):
    rule, basis, V, filt = disk8
    rng = np.random.default_rng(42)
    for _ in range(100):
        values = rng.standard_normal(len(rule)) * rng.uniform(0.1, 3)
        mu = rng.uniform(0.5, 2.0, basis.d)
        params = RegularizationParams(float(rng.uniform(0, 0.5)), mu)
        K, a, hh, rr, ff = _k_terms(values, V, rule, basis, filt, params)
        tol = 1e-9 * (1 + ff)
        assert abs(a - K) <= tol
        assert abs(hh + rr - (ff - 2 * K)) <= tol
        assert hh <= ff - 2 * K + tol
        assert -tol <= K <= ff / 2 + tol


def test_stability_bound(disk8):
    rule, basis, V, filt = disk8
    fine = disk_polar_rule(30)
    B = evaluate_basis(basis, fine.nodes)
    f = lambda p: np.exp(p[:, 0]) * np.sin(3 * p[:, 1])
    sup = math.e  # |exp(x) sin(3y)| <= e on the disk
    for lam in (0.0, 0.01, 0.1, 0.5):
        params = RegularizationParams(lam)
        alpha = hyper_coefficients(f(rule.nodes), V)
        beta = estimate("hybrid", alpha, params, filt).coeffs
        Hf = B @ beta
        norm2 = fine.integrate(Hf * Hf)
        assert norm2 <= math.pi * sup**2 - 2 * K_of_f(alpha, params, filt) + 1e-9


# ---------------------------------------------------------------------------
# inner products and errors


def test_discrete_inner_basics(disk8):
    rule, basis, V, _ = disk8
    assert discrete_inner(np.ones(len(rule)), np.ones(len(rule)), rule) == pytest.approx(math.pi)
    G = np.array([[discrete_inner(V.values[:, i], V.values[:, k], rule) for k in range(10)] for i in range(10)])
    assert np.max(np.abs(G - np.eye(10))) < 1e-9
    u, v = np.random.default_rng(0).standard_normal((2, len(rule)))
    assert discrete_inner(u, v, rule) == discrete_inner(v, u, rule)
    assert discrete_norm(u, rule) == pytest.approx(math.sqrt(discrete_inner(u, u, rule)))
    with pytest.raises(ValueError):
        discrete_inner(u[:-1], v[:-1], rule)


def test_l2_error_examples():
    L = 6
    rule = gauss_legendre(L + 1)
    basis = build_basis(INTERVAL, L, rule)
    ev = gauss_legendre(2 * L + 20)
    assert l2_error(np.zeros(basis.d), basis, lambda x: np.full(len(x), 3.0), ev) == pytest.approx(3 * math.sqrt(2))
    p = lambda x: x[:, 0] ** 5 - x[:, 0]
    alpha = hyper_coefficients(p(rule.nodes), vandermonde(basis, rule))
    assert l2_error(alpha, basis, p, ev) < 1e-8
    assert l2_error(alpha, basis, p(ev.nodes), ev) < 1e-8
    assert np.allclose(l2_error(np.stack([alpha, 0 * alpha], axis=1), basis, p, ev), [l2_error(alpha, basis, p, ev), l2_error(0 * alpha, basis, p, ev)])


def test_convergence_probe():
    f = lambda x: np.exp(-x[:, 0] ** 2)
    ev = gauss_legendre(100)
    errs = []
    for L in (4, 8, 16):
        rule = gauss_legendre(L + 1)
        basis = build_basis(INTERVAL, L, rule)
        alpha = hyper_coefficients(f(rule.nodes), vandermonde(basis, rule))
        est = estimate("hybrid", alpha, RegularizationParams(0.0), FilterFunction.for_basis(basis))
        errs.append(l2_error(est, basis, f, ev))
    assert errs[0] >= errs[1] >= errs[2]


def test_noise_coefficients(disk8):
    rule, basis, V, _ = disk8
    eps = np.random.default_rng(2).standard_normal(len(rule))
    assert np.allclose(noise_coefficients(eps, V), hyper_coefficients(eps, V))
