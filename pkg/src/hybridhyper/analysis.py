"""Prior parameter choice lambda(s), the J/H residual split, K(f) and L2 errors."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import BasisSpec, VandermondeMatrix, evaluate_basis
from .estimators import EstimateCoefficients, FilterFunction, RegularizationParams, SampleVector, soft_threshold
from .quadrature import QuadratureRule


def _coeffs(z) -> np.ndarray:
    return z.coeffs if isinstance(z, EstimateCoefficients) else np.asarray(z, dtype=float)


@dataclass(frozen=True)
class LambdaSchedule:
    """zeta_1 >= ... >= zeta_d, the sorted |alpha|; lambda(s) = zeta_s (1-based)."""

    zeta: np.ndarray

    def __call__(self, s: int) -> float:
        if not 1 <= s <= len(self.zeta):
            raise IndexError(f"lambda index {s} outside 1..{len(self.zeta)}")
        return float(self.zeta[s - 1])

    def __len__(self):
        return len(self.zeta)


def lambda_schedule(alpha) -> LambdaSchedule:
    alpha = np.asarray(alpha, dtype=float)
    if alpha.size < 1:
        raise ValueError("empty coefficient vector")
    zeta = np.sort(np.abs(alpha))[::-1].copy()
    zeta.flags.writeable = False
    return LambdaSchedule(zeta)


def sparsity(est) -> int:
    return int(np.count_nonzero(_coeffs(est)))


def J_term(z, alpha) -> float:
    """sum_l (z_l^2 - 2 z_l alpha_l)"""
    z, alpha = _coeffs(z), np.asarray(alpha, dtype=float)
    if z.shape != alpha.shape:
        raise ValueError("dimension mismatch")
    return float(np.sum(z * z - 2.0 * z * alpha))


def noise_coefficients(noise, vandermonde: VandermondeMatrix, rule: QuadratureRule | None = None) -> np.ndarray:
    """A^T W eps"""
    rule = vandermonde.rule if rule is None else rule
    return vandermonde.values.T @ (rule.weights * np.asarray(noise, dtype=float))


def H_term(z, noise, vandermonde: VandermondeMatrix, rule: QuadratureRule | None = None) -> float:
    """2 sum_l z_l sum_j w_j eps_j Phi_l(x_j)"""
    if noise is None:
        raise ValueError("H needs the noise vector")
    z = _coeffs(z)
    return float(2.0 * z @ noise_coefficients(noise, vandermonde, rule))


@dataclass(frozen=True)
class DecompositionTerms:
    J: float
    H: float
    const: float
    direct: float

    @property
    def residual(self) -> float:
        return abs(self.direct - (self.J + self.H + self.const))

    @property
    def decomposed(self) -> float:
        return self.J + self.H + self.const


def decompose(est, alpha, samples: SampleVector, vandermonde: VandermondeMatrix, rule: QuadratureRule | None = None) -> DecompositionTerms:
    """Weighted residual against the clean samples, split as J + H + ||W^1/2 f||^2."""
    rule = vandermonde.rule if rule is None else rule
    if samples.noise is None:
        raise ValueError("decomposition needs samples carrying their noise vector")
    z = _coeffs(est)
    clean = samples.clean
    w = rule.weights
    r = vandermonde.values @ z - clean
    return DecompositionTerms(
        J=J_term(z, alpha),
        H=H_term(z, samples.noise, vandermonde, rule),
        const=float(w @ (clean * clean)),
        direct=float(w @ (r * r)),
    )


def K_of_f(alpha, params: RegularizationParams, filt: FilterFunction) -> float:
    """sum_l h_l S(alpha_l) alpha_l - (h_l S(alpha_l))^2, nonnegative."""
    alpha = np.asarray(alpha, dtype=float)
    beta = filt.values * soft_threshold(alpha, params.thresholds(len(alpha)))
    return float(np.sum(beta * alpha - beta * beta))


def discrete_inner(u, v, rule: QuadratureRule) -> float:
    u, v = np.asarray(u, dtype=float), np.asarray(v, dtype=float)
    if u.shape != v.shape or u.shape[0] != len(rule):
        raise ValueError("values must align with the rule nodes")
    return float(rule.weights @ (u * v))


def discrete_norm(u, rule: QuadratureRule) -> float:
    return float(np.sqrt(discrete_inner(u, u, rule)))


def l2_error(est, basis: BasisSpec, f, eval_rule: QuadratureRule, eval_matrix: np.ndarray | None = None) -> float:
    """sqrt(sum_j w_j (p(x_j) - f(x_j))^2) on the evaluation rule.

    ``f`` is a callable or its precomputed values at the evaluation nodes.
    """
    z = _coeffs(est)
    B = evaluate_basis(basis, eval_rule.nodes) if eval_matrix is None else eval_matrix
    fv = f(eval_rule.nodes) if callable(f) else np.asarray(f, dtype=float)
    r = B @ z - (fv[:, None] if z.ndim == 2 else fv)
    w = eval_rule.weights
    if r.ndim == 2:
        return np.sqrt(w @ (r * r))
    return float(np.sqrt(w @ (r * r)))
