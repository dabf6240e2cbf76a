"""Independent oracles for the test-suite: random polynomials and their exact integrals.

Random polynomials are built from scaled Chebyshev products T_a(x/c) T_b(y/c)...,
a family unrelated to the bases under test, so reproduction checks do not
reduce to the Gram identity.
"""

from __future__ import annotations

import numpy as np

from hybridhyper.quadrature import DomainKind, monomial_exponents


def chebyshev_scale(domain) -> float:
    if domain.kind is DomainKind.UNION_OF_DISKS:
        return float(np.abs(domain.bounding_box()).max())
    return 1.0


class RandomPolynomial:
    """sum_k c_k prod_i T_{e_ki}(x_i / scale) with total degree <= degree."""

    def __init__(self, dim: int, degree: int, rng: np.random.Generator, scale: float = 1.0, n_terms: int = 30):
        exps = monomial_exponents(dim, degree)
        top = [e for e in exps if sum(e) == degree]
        pick = rng.choice(len(exps), size=min(n_terms, len(exps)), replace=False)
        chosen = {tuple(exps[i]) for i in pick}
        chosen.add(tuple(top[rng.integers(len(top))]))
        self.exps = np.array(sorted(chosen), dtype=int)
        self.coeffs = rng.standard_normal(len(self.exps)) / np.sqrt(len(self.exps))
        self.scale = scale
        self.degree = degree

    def __call__(self, x):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        theta = np.arccos(np.clip(x / self.scale, -1.0, 1.0))
        # analytic continuation outside [-1, 1] is not needed: all domains lie in the scaled box
        out = np.zeros(len(x))
        for c, e in zip(self.coeffs, self.exps):
            term = np.ones(len(x))
            for i, k in enumerate(e):
                term *= np.cos(k * theta[:, i])
            out += c * term
        return out


def random_polynomial(domain, degree: int, rng: np.random.Generator, n_terms: int = 30) -> RandomPolynomial:
    return RandomPolynomial(domain.ambient_dim, degree, rng, chebyshev_scale(domain), n_terms)


def random_monomial_combo(dim: int, degree: int, rng: np.random.Generator, n_terms: int = 12):
    """Random sparse monomial combination: returns (exponents, coefficients)."""
    exps = monomial_exponents(dim, degree)
    pick = rng.choice(len(exps), size=min(n_terms, len(exps)), replace=False)
    return [exps[i] for i in pick], rng.standard_normal(len(pick))


def eval_monomials(x, exps, coeffs, scale: float = 1.0):
    y = np.atleast_2d(x) / scale
    return sum(c * np.prod(y ** np.array(e), axis=1) for e, c in zip(exps, coeffs))
