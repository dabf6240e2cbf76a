"""Seeded Gaussian and impulse noise.

Trial ``t`` of seed ``s`` draws from ``SeedSequence(s, spawn_key=(t, k))``, with
one child stream ``k`` per noise component, so trials are independent and
reproducible regardless of execution order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class NoiseSpec:
    """Gaussian N(0, sigma^2) plus impulse I(a); either level may be zero.

    Impulse noise is uniform on [-a, a] with probability 1/2 per sample. With
    ``whole_vector`` a single Bernoulli draw switches the whole vector on or
    off instead.
    """

    sigma: float = 0.0
    impulse: float = 0.0
    seed: int = 0
    whole_vector: bool = False

    def __post_init__(self):
        if not self.sigma >= 0:
            raise ValueError(f"sigma must be nonnegative, got {self.sigma}")
        if not self.impulse >= 0:
            raise ValueError(f"impulse level must be nonnegative, got {self.impulse}")

    @classmethod
    def gaussian(cls, sigma: float, seed: int = 0) -> "NoiseSpec":
        return cls(sigma=sigma, seed=seed)

    @classmethod
    def impulse_noise(cls, a: float, seed: int = 0, whole_vector: bool = False) -> "NoiseSpec":
        return cls(impulse=a, seed=seed, whole_vector=whole_vector)


def _stream(seed: int, trial: int, component: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(trial, component)))


def generate(spec: NoiseSpec, n: int, trial: int = 0) -> np.ndarray:
    if n < 1:
        raise ValueError("n must be >= 1")
    out = np.zeros(n)
    if spec.sigma > 0:
        out += spec.sigma * _stream(spec.seed, trial, 0).standard_normal(n)
    if spec.impulse > 0:
        rng = _stream(spec.seed, trial, 1)
        values = spec.impulse * (1.0 - 2.0 * rng.random(n))
        on = rng.integers(0, 2, size=1 if spec.whole_vector else n)
        out += values * on
    return out
