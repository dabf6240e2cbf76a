"""Positive-weight, interior-node quadrature rules on the supported domains.

Every rule carries its claimed algebraic degree of exactness. Constructors
that cannot prove exactness analytically (cube parity set, disk radial map)
check it against closed-form moments before returning.
"""

from __future__ import annotations

import enum
import functools
import itertools
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np


class QuadratureError(ValueError):
    """A rule could not be built or failed its exactness check."""


class DesignFileError(QuadratureError):
    """A spherical design file is malformed."""


class UnsupportedDomainError(QuadratureError):
    """The domain configuration is outside what the constructors handle."""


class DomainKind(str, enum.Enum):
    INTERVAL = "interval"
    DISK = "disk"
    SPHERE = "sphere"
    CUBE = "cube"
    UNION_OF_DISKS = "union"


_AMBIENT_DIM = {
    DomainKind.INTERVAL: 1,
    DomainKind.DISK: 2,
    DomainKind.SPHERE: 3,
    DomainKind.CUBE: 3,
    DomainKind.UNION_OF_DISKS: 2,
}


@dataclass(frozen=True)
class Domain:
    """A compact domain. ``disks`` is only used for the union of disks."""

    kind: DomainKind
    disks: tuple[tuple[tuple[float, float], float], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "kind", DomainKind(self.kind))
        if self.kind is DomainKind.UNION_OF_DISKS:
            if not self.disks:
                raise UnsupportedDomainError("union of disks needs at least one disk")
            disks = tuple(((float(c[0]), float(c[1])), float(r)) for c, r in self.disks)
            object.__setattr__(self, "disks", disks)
            for _, r in disks:
                if not r > 0:
                    raise UnsupportedDomainError(f"disk radius must be positive, got {r}")
            for (c1, r1), (c2, r2) in itertools.combinations(disks, 2):
                if math.dist(c1, c2) < r1 + r2 - 1e-12:
                    raise UnsupportedDomainError(
                        f"overlapping disks {c1}, r={r1} and {c2}, r={r2}; "
                        "only pairwise disjoint unions are supported"
                    )

    @property
    def ambient_dim(self) -> int:
        return _AMBIENT_DIM[self.kind]

    @property
    def volume(self) -> float:
        """Analytic measure of the domain (the cube carries the Chebyshev weight)."""
        if self.kind is DomainKind.INTERVAL:
            return 2.0
        if self.kind is DomainKind.DISK:
            return math.pi
        if self.kind is DomainKind.SPHERE:
            return 4.0 * math.pi
        if self.kind is DomainKind.CUBE:
            return 1.0
        return math.pi * sum(r * r for _, r in self.disks)

    def bounding_box(self) -> np.ndarray:
        """Rows of (lower, upper) per coordinate."""
        if self.kind is DomainKind.UNION_OF_DISKS:
            c = np.array([c for c, _ in self.disks])
            r = np.array([r for _, r in self.disks])
            lo = (c - r[:, None]).min(axis=0)
            hi = (c + r[:, None]).max(axis=0)
            return np.stack([lo, hi], axis=1)
        return np.tile([-1.0, 1.0], (self.ambient_dim, 1))

    def contains(self, points, tol: float = 1e-12) -> np.ndarray:
        pts = as_points(points, self.ambient_dim)
        if self.kind in (DomainKind.INTERVAL, DomainKind.CUBE):
            return np.all(np.abs(pts) <= 1.0 + tol, axis=1)
        if self.kind is DomainKind.DISK:
            return np.hypot(pts[:, 0], pts[:, 1]) <= 1.0 + tol
        if self.kind is DomainKind.SPHERE:
            return np.abs(np.linalg.norm(pts, axis=1) - 1.0) <= tol
        inside = np.zeros(len(pts), dtype=bool)
        for c, r in self.disks:
            inside |= np.hypot(pts[:, 0] - c[0], pts[:, 1] - c[1]) <= r * (1.0 + tol)
        return inside


INTERVAL = Domain(DomainKind.INTERVAL)
DISK = Domain(DomainKind.DISK)
SPHERE = Domain(DomainKind.SPHERE)
CUBE = Domain(DomainKind.CUBE)


def as_points(points, dim: int) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1 and dim == 1:
        pts = pts[:, None]
    elif pts.ndim == 1:
        pts = pts[None, :]
    if pts.shape[1] != dim:
        raise ValueError(f"expected points of dimension {dim}, got shape {pts.shape}")
    return pts


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes (N x s), positive weights and algebraic degree of exactness."""

    domain: Domain
    nodes: np.ndarray
    weights: np.ndarray
    exactness: int
    name: str = ""
    volume: float = field(init=False)

    def __post_init__(self):
        nodes = as_points(self.nodes, self.domain.ambient_dim)
        object.__setattr__(self, "nodes", _frozen(nodes))
        object.__setattr__(self, "weights", _frozen(np.ravel(self.weights)))
        if len(self.weights) != len(self.nodes):
            raise QuadratureError("nodes and weights differ in length")
        if not np.all(self.weights > 0):
            raise QuadratureError(f"{self.name or 'rule'} has non-positive weights")
        object.__setattr__(self, "volume", float(np.sum(self.weights)))

    def __len__(self):
        return len(self.weights)

    def integrate(self, values) -> float:
        return float(np.dot(self.weights, values))


# ---------------------------------------------------------------------------
# closed-form moments


def interval_moment(k: int) -> float:
    """int_{-1}^{1} x^k dx"""
    return 0.0 if k % 2 else 2.0 / (k + 1)


def disk_moment(a: int, b: int) -> float:
    """int over the unit disk of x^a y^b dA"""
    if a % 2 or b % 2:
        return 0.0
    return (
        2.0
        * math.exp(math.lgamma((a + 1) / 2) + math.lgamma((b + 1) / 2) - math.lgamma((a + b) / 2 + 1))
        / (a + b + 2)
    )


def sphere_moment(a: int, b: int, c: int) -> float:
    """surface integral over S^2 of x^a y^b z^c"""
    if a % 2 or b % 2 or c % 2:
        return 0.0
    return 2.0 * math.exp(
        math.lgamma((a + 1) / 2)
        + math.lgamma((b + 1) / 2)
        + math.lgamma((c + 1) / 2)
        - math.lgamma((a + b + c + 3) / 2)
    )


def chebyshev_moment(k: int) -> float:
    """(1/pi) int_{-1}^{1} x^k (1 - x^2)^{-1/2} dx"""
    return 0.0 if k % 2 else math.comb(k, k // 2) / 2.0**k


def cube_moment(a: int, b: int, c: int) -> float:
    """int over [-1,1]^3 of x^a y^b z^c against the normalized product-Chebyshev weight"""
    return chebyshev_moment(a) * chebyshev_moment(b) * chebyshev_moment(c)


def shifted_disk_moment(a: int, b: int, center, radius: float, scale: float = 1.0) -> float:
    """int over B(center, radius) of (x/scale)^a (y/scale)^b dA, by binomial expansion."""
    cx, cy = center[0] / scale, center[1] / scale
    r = radius / scale
    total = 0.0
    for i in range(0, a + 1, 2):
        for j in range(0, b + 1, 2):
            total += (
                math.comb(a, i) * cx ** (a - i) * math.comb(b, j) * cy ** (b - j)
                * r ** (i + j) * disk_moment(i, j)
            )
    return total * radius**2


def monomial_exponents(dim: int, degree: int) -> list[tuple[int, ...]]:
    """All exponent tuples of total degree <= degree, graded."""
    out = []
    for n in range(degree + 1):
        for e in itertools.product(range(n + 1), repeat=dim):
            if sum(e) == n:
                out.append(e)
    return out


def monomial_moment(domain: Domain, exps: Sequence[int], scale: float = 1.0) -> float:
    """Closed-form integral of prod((x_i/scale)^e_i) over ``domain``."""
    kind = domain.kind
    if kind is DomainKind.INTERVAL:
        return interval_moment(exps[0]) / scale ** exps[0]
    if kind is DomainKind.DISK:
        return disk_moment(*exps) / scale ** sum(exps)
    if kind is DomainKind.SPHERE:
        return sphere_moment(*exps) / scale ** sum(exps)
    if kind is DomainKind.CUBE:
        return cube_moment(*exps) / scale ** sum(exps)
    return sum(shifted_disk_moment(exps[0], exps[1], c, r, scale) for c, r in domain.disks)


# ---------------------------------------------------------------------------
# exactness validation


@dataclass(frozen=True)
class ExactnessReport:
    max_deviation: float
    worst_index: int
    n_tested: int

    def passed(self, tol: float) -> bool:
        return self.max_deviation <= tol


def validate_exactness(
    rule: QuadratureRule,
    evaluate: Callable[[np.ndarray], np.ndarray],
    moments,
) -> ExactnessReport:
    """Compare discrete integrals of a family of test functions with their exact values.

    ``evaluate`` maps the (N, s) node array to an (N, m) matrix whose columns are
    the test functions; ``moments`` is either a length-m sequence or a callable
    index -> exact integral.
    """
    vals = np.asarray(evaluate(rule.nodes), dtype=float)
    if vals.ndim == 1:
        vals = vals[:, None]
    discrete = rule.weights @ vals
    if callable(moments):
        exact = np.array([moments(i) for i in range(vals.shape[1])], dtype=float)
    else:
        exact = np.asarray(moments, dtype=float)
    dev = np.abs(discrete - exact)
    worst = int(np.argmax(dev))
    return ExactnessReport(float(dev[worst]), worst, vals.shape[1])


def monomial_report(rule: QuadratureRule, degree: int | None = None, scale: float = 1.0) -> ExactnessReport:
    """Exactness check of ``rule`` on all (scaled) monomials up to ``degree``."""
    degree = rule.exactness if degree is None else degree
    dim = rule.domain.ambient_dim
    exps = monomial_exponents(dim, degree)

    def evaluate(x):
        y = x / scale
        return np.stack([np.prod(y ** np.array(e), axis=1) for e in exps], axis=1)

    return validate_exactness(rule, evaluate, [monomial_moment(rule.domain, e, scale) for e in exps])


# ---------------------------------------------------------------------------
# interval


def _legendre_and_derivative(n: int, x: np.ndarray):
    p0 = np.ones_like(x)
    if n == 0:
        return p0, np.zeros_like(x)
    p1 = x.copy()
    for k in range(1, n):
        p0, p1 = p1, ((2 * k + 1) * x * p1 - k * p0) / (k + 1)
    dp = n * (x * p1 - p0) / (x * x - 1.0)
    return p1, dp


@functools.lru_cache(maxsize=None)
def gauss_legendre(n: int, tol: float = 1e-15, maxiter: int = 100) -> QuadratureRule:
    """n-point Gauss-Legendre rule on [-1, 1] (exactness 2n-1).

    Roots are found by Newton's method on P_n started from the asymptotic
    guesses cos(pi (i - 1/4) / (n + 1/2)).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return QuadratureRule(INTERVAL, np.zeros((1, 1)), [2.0], 1, name="gauss-legendre-1")
    i = np.arange(1, n + 1)
    x = np.cos(np.pi * (i - 0.25) / (n + 0.5))
    for _ in range(maxiter):
        p, dp = _legendre_and_derivative(n, x)
        step = p / dp
        x = x - step
        if np.max(np.abs(step)) < tol:
            break
    _, dp = _legendre_and_derivative(n, x)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    order = np.argsort(x)
    x, w = x[order], w[order]
    # enforce exact symmetry
    x = 0.5 * (x - x[::-1])
    w = 0.5 * (w + w[::-1])
    return QuadratureRule(INTERVAL, x[:, None], w, 2 * n - 1, name=f"gauss-legendre-{n}")


# ---------------------------------------------------------------------------
# disk


def _polar_nodes(L: int, radial: str):
    gl = gauss_legendre(L + 1)
    t, wt = gl.nodes[:, 0], gl.weights
    m = np.arange(2 * L + 1)
    theta = 2.0 * np.pi * m / (2 * L + 1)
    if radial == "mapped":
        r = 0.5 * (t + 1.0)
        wr = 0.5 * wt * r * 2.0 * np.pi / (2 * L + 1)
    else:
        raise ValueError(radial)
    R, TH = np.meshgrid(r, theta, indexing="ij")
    W = np.repeat(wr[:, None], len(theta), axis=1)
    nodes = np.stack([(R * np.cos(TH)).ravel(), (R * np.sin(TH)).ravel()], axis=1)
    return nodes, W.ravel()


@functools.lru_cache(maxsize=None)
def disk_polar_rule(L: int) -> QuadratureRule:
    """Polar product rule on the unit disk, (L+1)(2L+1) nodes, exactness 2L.

    Radial direction: (L+1)-point Gauss-Legendre mapped to [0, 1] integrating
    r * p(r, .); angular direction: trapezoid on 2L+1 equispaced angles.
    """
    if L < 1:
        raise ValueError("L must be >= 1")
    nodes, w = _polar_nodes(L, "mapped")
    rule = QuadratureRule(DISK, nodes, w, 2 * L, name=f"disk-polar-{L}")
    rep = monomial_report(rule, min(2 * L, 24))
    if not rep.passed(1e-11):
        raise QuadratureError(f"disk rule L={L} failed moment check: {rep}")
    return rule


def _affine_disk(rule: QuadratureRule, center, radius: float):
    return rule.nodes * radius + np.asarray(center, dtype=float), rule.weights * radius**2


def union_disks_rule(domain: Domain, degree: int) -> QuadratureRule:
    """Composite rule: one affinely mapped polar rule per disjoint disk."""
    if domain.kind is not DomainKind.UNION_OF_DISKS:
        raise UnsupportedDomainError("union_disks_rule needs a union-of-disks domain")
    base = disk_polar_rule(max(1, math.ceil(degree / 2)))
    parts = [_affine_disk(base, c, r) for c, r in domain.disks]
    nodes = np.concatenate([p[0] for p in parts])
    w = np.concatenate([p[1] for p in parts])
    return QuadratureRule(domain, nodes, w, degree, name=f"union-{len(domain.disks)}-disks-{degree}")


def ring_of_disks(n_disks: int, ring_radius: float, disk_radius: float):
    theta = 2.0 * np.pi * np.arange(n_disks) / n_disks
    return [((ring_radius * math.cos(t), ring_radius * math.sin(t)), disk_radius) for t in theta]


def two_rings_domain(radii=(2.0, 4.0), n_disks: int = 19, shrink: float = 8.0) -> Domain:
    """Two concentric rings of ``n_disks`` disks, each of radius ring_radius/shrink."""
    disks = []
    for rr in radii:
        disks += ring_of_disks(n_disks, rr, rr / shrink)
    return Domain(DomainKind.UNION_OF_DISKS, tuple(disks))


# ---------------------------------------------------------------------------
# sphere


@functools.lru_cache(maxsize=None)
def sphere_product_rule(L: int) -> QuadratureRule:
    """Gauss-Legendre in cos(theta) times trapezoid in phi; exactness 2L on S^2."""
    if L < 1:
        raise ValueError("L must be >= 1")
    gl = gauss_legendre(L + 1)
    z, wz = gl.nodes[:, 0], gl.weights
    phi = 2.0 * np.pi * np.arange(2 * L + 1) / (2 * L + 1)
    Z, PHI = np.meshgrid(z, phi, indexing="ij")
    s = np.sqrt(1.0 - Z * Z)
    nodes = np.stack([(s * np.cos(PHI)).ravel(), (s * np.sin(PHI)).ravel(), Z.ravel()], axis=1)
    w = np.repeat(wz[:, None] * 2.0 * np.pi / (2 * L + 1), len(phi), axis=1).ravel()
    return QuadratureRule(SPHERE, nodes, w, 2 * L, name=f"sphere-product-{L}")


def read_design_file(path) -> np.ndarray:
    rows = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        parts = s.split()
        if len(parts) != 3:
            raise DesignFileError(f"{path}:{lineno}: expected 3 coordinates, got {len(parts)}")
        try:
            rows.append([float(p) for p in parts])
        except ValueError as exc:
            raise DesignFileError(f"{path}:{lineno}: {exc}") from None
    if not rows:
        raise DesignFileError(f"{path}: no points")
    pts = np.array(rows)
    norms = np.linalg.norm(pts, axis=1)
    bad = np.flatnonzero(np.abs(norms - 1.0) > 1e-8)
    if len(bad):
        raise DesignFileError(f"{path}: point {bad[0] + 1} has norm {norms[bad[0]]!r}")
    return pts


def load_spherical_design(path, t: int) -> QuadratureRule:
    """Equal-weight rule 4 pi / N from a design file, checked on spherical harmonics up to t."""
    from .basis import real_spherical_harmonics

    pts = read_design_file(path)
    rule = QuadratureRule(SPHERE, pts, np.full(len(pts), 4.0 * np.pi / len(pts)), t, name=f"design-{t}-{len(pts)}")
    moments = np.zeros((t + 1) ** 2)
    moments[0] = math.sqrt(4.0 * np.pi)
    rep = validate_exactness(rule, lambda x: real_spherical_harmonics(x, t), moments)
    if not rep.passed(1e-8 * 4.0 * np.pi):
        ell = int(math.isqrt(rep.worst_index))
        m = rep.worst_index - ell * ell - ell
        raise QuadratureError(
            f"{path} is not a {t}-design: worst spherical harmonic index {rep.worst_index} "
            f"(degree {ell}, order {m}), deviation {rep.max_deviation:.3e}"
        )
    return rule


# ---------------------------------------------------------------------------
# cube


def _cube_candidates(L: int) -> dict[str, np.ndarray]:
    """Parity-selected subsets of the index grid {0..L+1}^3."""
    idx = np.array(list(itertools.product(range(L + 2), repeat=3)))
    par = idx % 2
    return {
        # (even, odd, even) u (odd, even, odd)
        "alternating": (par[:, 0] == par[:, 2]) & (par[:, 1] != par[:, 0]),
        "even-sum": par.sum(axis=1) % 2 == 0,
        "uniform-parity": (par.sum(axis=1) == 0) | (par.sum(axis=1) == 3),
    }, idx


def _cube_rule_from_mask(L: int, mask: np.ndarray, idx: np.ndarray) -> QuadratureRule:
    sel = idx[mask]
    nodes = np.cos(np.pi * sel / (L + 1))
    on_boundary = ((sel == 0) | (sel == L + 1)).sum(axis=1)
    w = 4.0 / (L + 1) ** 3 * 0.5**on_boundary
    return QuadratureRule(CUBE, nodes, w, 2 * L, name=f"cube-chebyshev-lobatto-{L}")


def cube_chebyshev_report(rule: QuadratureRule, degree: int) -> ExactnessReport:
    """Discrete integrals of T~_a T~_b T~_c for a + b + c <= degree against delta_{abc,0}."""
    exps = monomial_exponents(3, degree)
    theta = np.arccos(np.clip(rule.nodes, -1.0, 1.0))
    k = np.arange(degree + 1)
    per_axis = [np.cos(theta[:, i : i + 1] * k) * np.where(k > 0, math.sqrt(2.0), 1.0) for i in range(3)]

    def evaluate(_):
        return np.stack([per_axis[0][:, a] * per_axis[1][:, b] * per_axis[2][:, c] for a, b, c in exps], axis=1)

    moments = np.zeros(len(exps))
    moments[0] = 1.0
    return validate_exactness(rule, evaluate, moments)


_CUBE_SELECTION: dict[int, str] = {}


@functools.lru_cache(maxsize=None)
def cube_rule(L: int) -> QuadratureRule:
    """Chebyshev-Lobatto subgrid rule for the product-Chebyshev measure, exactness 2L.

    Candidate parity subsets of C_{L+1}^3 are checked against Chebyshev moments
    up to degree 2L; the first passing one with about (L+2)^3/4 nodes is kept.
    """
    if L < 1:
        raise ValueError("L must be >= 1")
    masks, idx = _cube_candidates(L)
    target = (L + 2) ** 3 / 4.0
    names = [_CUBE_SELECTION[L]] if L in _CUBE_SELECTION else sorted(
        masks, key=lambda n: abs(masks[n].sum() - target)
    )
    for name in names:
        rule = _cube_rule_from_mask(L, masks[name], idx)
        if abs(len(rule) - target) > 0.25 * target:
            continue
        if not math.isclose(rule.volume, 1.0, rel_tol=1e-10):
            continue
        if cube_chebyshev_report(rule, 2 * L).passed(1e-10):
            _CUBE_SELECTION[L] = name
            return rule
    raise QuadratureError(f"no parity candidate passed the degree-{2 * L} Chebyshev moment check")


def cube_rule_selection(L: int) -> str:
    cube_rule(L)
    return _CUBE_SELECTION[L]


# ---------------------------------------------------------------------------


def default_rule(domain: Domain, L: int, design_file=None) -> QuadratureRule:
    """A 2L-exact rule for hyperinterpolation of degree L on ``domain``."""
    kind = domain.kind
    if kind is DomainKind.INTERVAL:
        return gauss_legendre(L + 1)
    if kind is DomainKind.DISK:
        return disk_polar_rule(L)
    if kind is DomainKind.SPHERE:
        if design_file is not None:
            return load_spherical_design(design_file, 2 * L)
        return sphere_product_rule(L)
    if kind is DomainKind.CUBE:
        return cube_rule(L)
    return union_disks_rule(domain, 2 * L)


def evaluation_rule(domain: Domain, L: int, design_file=None) -> QuadratureRule:
    """A rule of exactness strictly above 2L used to measure L2 errors."""
    kind = domain.kind
    if kind is DomainKind.INTERVAL:
        return gauss_legendre(2 * L + 20)
    if kind is DomainKind.DISK:
        return disk_polar_rule(max(50, L + 1))
    if kind is DomainKind.SPHERE:
        if design_file is not None:
            rule = load_spherical_design(design_file, _design_degree_hint(design_file))
            if rule.exactness > 2 * L:
                return rule
        return sphere_product_rule(max(25, L + 1))
    if kind is DomainKind.CUBE:
        return cube_rule(max(25, L + 1))
    return union_disks_rule(domain, max(40, 2 * L + 2))


def _design_degree_hint(path) -> int:
    """Largest t for which the design file validates (scanning down from a size estimate)."""
    pts = read_design_file(path)
    from .basis import real_spherical_harmonics

    n = len(pts)
    t = int(math.isqrt(2 * n)) + 2
    Y = real_spherical_harmonics(pts, t)
    means = np.abs(Y.mean(axis=0))
    means[0] = 0.0
    for deg in range(t, 0, -1):
        if np.all(means[1 : (deg + 1) ** 2] < 1e-8):
            return deg
    return 0
