"""Hyperinterpolation coefficients and the regularized variants as coefficient maps.

With an orthonormal basis and a 2L-exact rule every variant has a closed
form: the discrete coefficients alpha = A^T W f are thresholded and/or
filtered entry by entry.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .basis import BasisSpec, VandermondeMatrix, evaluate_basis
from .quadrature import QuadratureRule


class Variant(str, enum.Enum):
    PLAIN = "plain"
    FILTERED = "filtered"
    LASSO = "lasso"
    HARD = "hard"
    HYBRID = "hybrid"
    TIKHONOV = "tikhonov"


SPARSE_VARIANTS = (Variant.HYBRID, Variant.LASSO, Variant.HARD)


@dataclass(frozen=True)
class SampleVector:
    """Samples at the rule nodes; with ``noise`` set, ``values`` are the noisy ones."""

    values: np.ndarray
    noise: np.ndarray | None = None
    clean: np.ndarray | None = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", values)
        if self.noise is None:
            if self.clean is None:
                object.__setattr__(self, "clean", values)
            return
        noise = np.asarray(self.noise, dtype=float)
        if noise.shape != values.shape:
            raise ValueError("noise and values differ in shape")
        object.__setattr__(self, "noise", noise)
        if self.clean is None:
            object.__setattr__(self, "clean", values - noise)
        else:
            clean = np.asarray(self.clean, dtype=float)
            if np.max(np.abs(values - noise - clean), initial=0.0) > 1e-15 * (1.0 + np.max(np.abs(values))):
                raise ValueError("values - noise does not match the clean samples")
            object.__setattr__(self, "clean", clean)

    @classmethod
    def contaminate(cls, clean, noise) -> "SampleVector":
        clean = np.asarray(clean, dtype=float)
        noise = np.asarray(noise, dtype=float)
        return cls(clean + noise, noise, clean)

    @property
    def has_noise(self) -> bool:
        return self.noise is not None

    def __len__(self):
        return len(self.values)


def hyper_coefficients(samples, vandermonde: VandermondeMatrix, rule: QuadratureRule | None = None) -> np.ndarray:
    """alpha_l = sum_j w_j f(x_j) Phi_l(x_j)."""
    rule = vandermonde.rule if rule is None else rule
    values = samples.values if isinstance(samples, SampleVector) else np.asarray(samples, dtype=float)
    A = vandermonde.values
    if values.shape[0] != A.shape[0] or len(rule.weights) != A.shape[0]:
        raise ValueError(f"{values.shape[0]} samples for a {A.shape[0]}-node Vandermonde matrix")
    w = rule.weights[:, None] if values.ndim == 2 else rule.weights
    return A.T @ (w * values)


def soft_threshold(a, k):
    """max(0, a - k) + min(0, a + k); zero on |a| <= k."""
    a = np.asarray(a, dtype=float)
    out = np.sign(a) * np.maximum(np.abs(a) - k, 0.0)
    return out + 0.0 if out.ndim else float(out) + 0.0


def hard_threshold(a, k):
    """a where |a| > k, zero otherwise."""
    a = np.asarray(a, dtype=float)
    out = np.where(np.abs(a) > k, a, 0.0)
    return out if out.ndim else float(out)


def sine_squared_filter(x):
    """1 on [0, 1/2], sin^2(pi x) on [1/2, 1], 0 beyond."""
    x = np.asarray(x, dtype=float)
    return np.where(x <= 0.5, 1.0, np.where(x >= 1.0, 0.0, np.sin(np.pi * x) ** 2))


@dataclass(frozen=True)
class FilterFunction:
    """A filter h and its values h_l = h(deg Phi_l / L) on a basis."""

    ratios: np.ndarray
    values: np.ndarray
    h: Callable = field(default=sine_squared_filter, repr=False, compare=False)

    @classmethod
    def for_degrees(cls, degrees, L: int, h: Callable = sine_squared_filter) -> "FilterFunction":
        ratios = np.asarray(degrees, dtype=float) / L
        values = np.clip(np.asarray(h(ratios), dtype=float), 0.0, 1.0)
        return cls(ratios, values, h)

    @classmethod
    def for_basis(cls, basis: BasisSpec, h: Callable = sine_squared_filter) -> "FilterFunction":
        return cls.for_degrees(basis.degrees, basis.L, h)


@dataclass(frozen=True)
class RegularizationParams:
    lam: float = 0.0
    mu: np.ndarray | None = None

    def __post_init__(self):
        if not self.lam >= 0:
            raise ValueError(f"regularization parameter must be nonnegative, got {self.lam}")
        if self.mu is not None:
            mu = np.asarray(self.mu, dtype=float)
            if np.any(mu <= 0):
                raise ValueError("penalty weights must be positive")
            object.__setattr__(self, "mu", mu)

    def thresholds(self, d: int) -> np.ndarray:
        return self.lam * (np.ones(d) if self.mu is None else self.mu)


@dataclass(frozen=True)
class EstimateCoefficients:
    variant: Variant
    coeffs: np.ndarray
    params: RegularizationParams

    @property
    def sparsity(self) -> int:
        return int(np.count_nonzero(self.coeffs))


def estimate_coeffs(variant, alpha, lam: float = 0.0, h=None, mu=None) -> np.ndarray:
    """Array-level estimator; ``h`` is the vector of filter values, ``alpha`` may be (d,) or (d, k)."""
    variant = Variant(variant)
    alpha = np.asarray(alpha, dtype=float)
    if lam < 0:
        raise ValueError(f"regularization parameter must be nonnegative, got {lam}")
    k = lam if mu is None else lam * np.asarray(mu, dtype=float).reshape((-1,) + (1,) * (alpha.ndim - 1))
    hv = None if h is None else np.asarray(h, dtype=float).reshape((-1,) + (1,) * (alpha.ndim - 1))
    if variant is Variant.PLAIN:
        return alpha.copy()
    if variant is Variant.TIKHONOV:
        return alpha / (1.0 + lam)
    if variant is Variant.HARD:
        return np.where(np.abs(alpha) > lam, alpha, 0.0)
    if variant is Variant.LASSO:
        return soft_threshold(alpha, k)
    if hv is None:
        raise ValueError(f"{variant.value} estimate needs filter values")
    if variant is Variant.FILTERED:
        return hv * alpha
    return hv * soft_threshold(alpha, k)


def estimate(variant, alpha, params: RegularizationParams, filt: FilterFunction | None = None) -> EstimateCoefficients:
    """Apply one of the six coefficient transforms to ``alpha``."""
    variant = Variant(variant)
    coeffs = estimate_coeffs(variant, alpha, params.lam, None if filt is None else filt.values, params.mu)
    coeffs.flags.writeable = False
    return EstimateCoefficients(variant, coeffs, params)


def evaluate_estimate(est, basis: BasisSpec, points) -> np.ndarray:
    coeffs = est.coeffs if isinstance(est, EstimateCoefficients) else np.asarray(est, dtype=float)
    if coeffs.shape[0] != basis.d:
        raise ValueError(f"{coeffs.shape[0]} coefficients for a basis of dimension {basis.d}")
    return evaluate_basis(basis, points) @ coeffs


@dataclass(frozen=True)
class BCoefficients:
    """Ridge weights b_l of the l2^2 term; ``at_cutoff`` marks deg/L >= 1 (b infinite)."""

    b: np.ndarray
    at_cutoff: np.ndarray


def b_coefficients(filt: FilterFunction) -> BCoefficients:
    x, h = filt.ratios, filt.values
    at_cutoff = x >= 1.0
    with np.errstate(divide="ignore"):
        b = np.where(x <= 0.5, 0.0, np.sqrt(np.maximum(1.0 / h - 1.0, 0.0)))
    b = np.where(at_cutoff, np.inf, b)
    return BCoefficients(b, at_cutoff)
