"""Orthonormal polynomial bases of P_L on each domain and their Vandermonde matrices."""

from __future__ import annotations

import dataclasses
import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular

from .quadrature import Domain, DomainKind, QuadratureRule, as_points


class BasisError(ValueError):
    """The rule cannot resolve P_L, or the raw basis is too ill-conditioned."""


class BasisKind(str, enum.Enum):
    LEGENDRE = "legendre"
    RIDGE = "ridge"
    SPHERICAL_HARMONIC = "spherical-harmonic"
    CHEBYSHEV_TENSOR = "chebyshev-tensor"
    NUMERICAL_QR = "numerical-qr"


GRAM_TOL = 1e-8
MAX_CONDITION = 1e12


def dimension(domain: Domain, L: int) -> int:
    kind = domain.kind
    if kind is DomainKind.INTERVAL:
        return L + 1
    if kind in (DomainKind.DISK, DomainKind.UNION_OF_DISKS):
        return (L + 1) * (L + 2) // 2
    if kind is DomainKind.SPHERE:
        return (L + 1) ** 2
    return math.comb(L + 3, 3)


# ---------------------------------------------------------------------------
# raw families


def legendre_orthonormal(x, L: int) -> np.ndarray:
    """sqrt((2k+1)/2) P_k(x), k = 0..L, via the three-term recurrence."""
    x = np.asarray(x, dtype=float).ravel()
    P = np.empty((len(x), L + 1))
    P[:, 0] = 1.0
    if L >= 1:
        P[:, 1] = x
    for k in range(1, L):
        P[:, k + 1] = ((2 * k + 1) * x * P[:, k] - k * P[:, k - 1]) / (k + 1)
    return P * np.sqrt((2 * np.arange(L + 1) + 1) / 2.0)


def chebyshev_u(t, n: int) -> np.ndarray:
    """Chebyshev polynomials of the second kind U_0..U_n at t, columns by degree."""
    t = np.asarray(t, dtype=float)
    U = np.empty(t.shape + (n + 1,))
    U[..., 0] = 1.0
    if n >= 1:
        U[..., 1] = 2.0 * t
    for k in range(1, n):
        U[..., k + 1] = 2.0 * t * U[..., k] - U[..., k - 1]
    return U


def chebyshev_t(t, n: int) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    T = np.empty(t.shape + (n + 1,))
    T[..., 0] = 1.0
    if n >= 1:
        T[..., 1] = t
    for k in range(1, n):
        T[..., k + 1] = 2.0 * t * T[..., k] - T[..., k - 1]
    return T


def ridge_polynomials(points, L: int) -> np.ndarray:
    """Logan-Shepp ridge basis U_n(x cos a_k + y sin a_k)/sqrt(pi), a_k = k pi/(n+1).

    Ordered by degree n, then k = 0..n.
    """
    pts = np.asarray(points, dtype=float)
    cols = []
    for n in range(L + 1):
        ang = np.pi * np.arange(n + 1) / (n + 1)
        t = pts[:, :1] * np.cos(ang) + pts[:, 1:2] * np.sin(ang)
        cols.append(chebyshev_u(t, n)[..., n])
    return np.concatenate(cols, axis=1) / math.sqrt(math.pi)


def real_spherical_harmonics(points, L: int) -> np.ndarray:
    """Real, fully normalized spherical harmonics, ordered (l, m), m = -l..l.

    No Condon-Shortley phase. Off the sphere the columns are the solid
    harmonics |x|^l Y_lm(x/|x|), i.e. the polynomial continuation.
    """
    pts = np.asarray(points, dtype=float)
    r = np.linalg.norm(pts, axis=1)
    safe = np.where(r > 0, r, 1.0)
    x, y, z = (pts / safe[:, None]).T
    z = np.where(r > 0, z, 1.0)
    s = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    phi = np.arctan2(y, x)
    n = len(pts)

    # normalized associated Legendre functions, int_{S^2} (Pbar_l^m)^2 = 1 for m = 0
    P = {}
    P[0, 0] = np.full(n, 1.0 / math.sqrt(4.0 * math.pi))
    for m in range(1, L + 1):
        P[m, m] = math.sqrt((2 * m + 1) / (2.0 * m)) * s * P[m - 1, m - 1]
    for m in range(0, L):
        P[m + 1, m] = math.sqrt(2 * m + 3) * z * P[m, m]
    for m in range(0, L + 1):
        for ell in range(m + 2, L + 1):
            a = math.sqrt((4 * ell * ell - 1) / (ell * ell - m * m))
            a_prev = math.sqrt((4 * (ell - 1) ** 2 - 1) / ((ell - 1) ** 2 - m * m))
            P[ell, m] = a * (z * P[ell - 1, m] - P[ell - 2, m] / a_prev)

    Y = np.empty((n, (L + 1) ** 2))
    cos_m = [np.cos(m * phi) for m in range(L + 1)]
    sin_m = [np.sin(m * phi) for m in range(L + 1)]
    rt2 = math.sqrt(2.0)
    for ell in range(L + 1):
        base = ell * ell + ell
        rl = r**ell
        Y[:, base] = P[ell, 0] * rl
        for m in range(1, ell + 1):
            Y[:, base + m] = rt2 * P[ell, m] * cos_m[m] * rl
            Y[:, base - m] = rt2 * P[ell, m] * sin_m[m] * rl
    return Y


def graded_exponents(dim: int, L: int) -> list[tuple[int, ...]]:
    """Total degree ascending, lexicographic within a degree."""
    out = []
    for n in range(L + 1):
        if dim == 2:
            out += [(a, n - a) for a in range(n + 1)]
        else:
            out += [(a, b, n - a - b) for a in range(n + 1) for b in range(n - a + 1)]
    return out


def chebyshev_tensor(points, L: int, box=None) -> np.ndarray:
    """Normalized tensor Chebyshev T~_a(x1) T~_b(x2) [T~_c(x3)], graded-lex order.

    With ``box`` the coordinates are first mapped affinely onto [-1, 1].
    """
    pts = np.asarray(points, dtype=float)
    dim = pts.shape[1]
    if box is not None:
        lo, hi = box[:, 0], box[:, 1]
        pts = (2.0 * pts - (lo + hi)) / (hi - lo)
    scale = np.where(np.arange(L + 1) > 0, math.sqrt(2.0), 1.0)
    T = [chebyshev_t(pts[:, i], L) * scale for i in range(dim)]
    exps = graded_exponents(dim, L)
    out = np.ones((len(pts), len(exps)))
    for j, e in enumerate(exps):
        for i, k in enumerate(e):
            out[:, j] *= T[i][:, k]
    return out


def _degrees(domain: Domain, L: int) -> np.ndarray:
    kind = domain.kind
    if kind is DomainKind.INTERVAL:
        return np.arange(L + 1)
    if kind in (DomainKind.DISK, DomainKind.UNION_OF_DISKS):
        return np.repeat(np.arange(L + 1), np.arange(1, L + 2))
    if kind is DomainKind.SPHERE:
        return np.repeat(np.arange(L + 1), 2 * np.arange(L + 1) + 1)
    return np.array([sum(e) for e in graded_exponents(3, L)])


_KIND_FOR_DOMAIN = {
    DomainKind.INTERVAL: BasisKind.LEGENDRE,
    DomainKind.DISK: BasisKind.RIDGE,
    DomainKind.SPHERE: BasisKind.SPHERICAL_HARMONIC,
    DomainKind.CUBE: BasisKind.CHEBYSHEV_TENSOR,
    DomainKind.UNION_OF_DISKS: BasisKind.NUMERICAL_QR,
}


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BasisSpec:
    """Ordered triangular orthonormal basis Phi_1..Phi_d of P_L(domain).

    ``change`` is an optional upper-triangular matrix applied on the right of
    the raw family (numerically orthonormalized bases, or renormalized ones).
    """

    domain: Domain
    L: int
    kind: BasisKind
    degrees: np.ndarray
    change: np.ndarray | None = None
    box: np.ndarray | None = None

    @property
    def d(self) -> int:
        return len(self.degrees)

    def raw(self, points) -> np.ndarray:
        pts = as_points(points, self.domain.ambient_dim)
        if self.kind is BasisKind.LEGENDRE:
            return legendre_orthonormal(pts[:, 0], self.L)
        if self.kind is BasisKind.RIDGE:
            return ridge_polynomials(pts, self.L)
        if self.kind is BasisKind.SPHERICAL_HARMONIC:
            return real_spherical_harmonics(pts, self.L)
        if self.kind is BasisKind.CHEBYSHEV_TENSOR:
            return chebyshev_tensor(pts, self.L)
        return chebyshev_tensor(pts, self.L, box=self.box)

    def __call__(self, points) -> np.ndarray:
        return evaluate_basis(self, points)


def evaluate_basis(basis: BasisSpec, points) -> np.ndarray:
    """Matrix with entry [i, l] = Phi_l(points[i])."""
    raw = basis.raw(points)
    if basis.change is not None:
        return raw @ basis.change
    return raw


@dataclass(frozen=True)
class VandermondeMatrix:
    values: np.ndarray
    rule: QuadratureRule
    basis: BasisSpec

    @property
    def gram(self) -> np.ndarray:
        A = self.values
        return A.T @ (self.rule.weights[:, None] * A)

    def gram_deviation(self) -> float:
        return float(np.max(np.abs(self.gram - np.eye(self.basis.d))))


def vandermonde(basis: BasisSpec, rule: QuadratureRule) -> VandermondeMatrix:
    A = evaluate_basis(basis, rule.nodes)
    A.flags.writeable = False
    return VandermondeMatrix(A, rule, basis)


def _weighted_qr(M: np.ndarray) -> np.ndarray:
    """Upper-triangular R with M R^{-1} orthonormal; two passes for accuracy."""
    if M.shape[0] < M.shape[1]:
        raise BasisError(f"{M.shape[0]} nodes cannot resolve a {M.shape[1]}-dimensional space")
    _, R1 = np.linalg.qr(M)
    diag = np.abs(np.diag(R1))
    if diag.min() <= 1e-13 * diag.max():
        raise BasisError(
            f"weighted Vandermonde is rank deficient (min |R_ii| = {diag.min():.3e}); "
            "the rule cannot resolve the polynomial space"
        )
    M1 = solve_triangular(R1, M.T, trans="T", lower=False).T
    _, R2 = np.linalg.qr(M1)
    return R2 @ R1


def _require_exactness(rule: QuadratureRule, L: int):
    if rule.exactness < 2 * L:
        raise BasisError(f"rule exactness {rule.exactness} < 2L = {2 * L}")


def build_basis(domain: Domain, L: int, rule: QuadratureRule) -> BasisSpec:
    """The domain's orthonormal basis of P_L, certified on ``rule``."""
    _require_exactness(rule, L)
    kind = _KIND_FOR_DOMAIN[domain.kind]
    degrees = _degrees(domain, L)
    degrees.flags.writeable = False
    if kind is BasisKind.NUMERICAL_QR:
        box = domain.bounding_box()
        basis = BasisSpec(domain, L, kind, degrees, box=box)
        M = np.sqrt(rule.weights)[:, None] * basis.raw(rule.nodes)
        cond = np.linalg.cond(M)
        if not cond < MAX_CONDITION:
            raise BasisError(f"raw bounding-box Chebyshev Vandermonde has condition {cond:.3e} > {MAX_CONDITION:.0e}")
        R = _weighted_qr(M)
        change = solve_triangular(R, np.eye(len(R)), lower=False)
        change.flags.writeable = False
        return dataclasses.replace(basis, change=change)
    basis = BasisSpec(domain, L, kind, degrees)
    return renormalize_if_needed(basis, rule)


def renormalize_if_needed(basis: BasisSpec, rule: QuadratureRule, tol: float = GRAM_TOL) -> BasisSpec:
    """Re-orthonormalize by weighted QR when the discrete Gram matrix is off the identity."""
    _require_exactness(rule, basis.L)
    V = vandermonde(basis, rule)
    if V.gram_deviation() <= tol:
        return basis
    M = np.sqrt(rule.weights)[:, None] * V.values
    R = _weighted_qr(M)
    Rinv = solve_triangular(R, np.eye(len(R)), lower=False)
    change = Rinv if basis.change is None else basis.change @ Rinv
    change.flags.writeable = False
    return dataclasses.replace(basis, change=change)
