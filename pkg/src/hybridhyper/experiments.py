"""Seeded trial batteries: tables of mean L2 errors and lambda(s) sweeps."""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from .analysis import lambda_schedule
from .basis import BasisSpec, VandermondeMatrix, build_basis, evaluate_basis, vandermonde
from .estimators import SPARSE_VARIANTS, FilterFunction, Variant, estimate_coeffs
from .noise import NoiseSpec, generate
from .quadrature import (
    CUBE,
    DISK,
    INTERVAL,
    SPHERE,
    Domain,
    DomainKind,
    QuadratureRule,
    default_rule,
    evaluation_rule,
    two_rings_domain,
)


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# test functions


OCTAHEDRON = ((1.0, 0.0, 0.0), (-1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, -1.0, 0.0), (0.0, 0.0, 1.0), (0.0, 0.0, -1.0))

# 9 Gamma(5/2) / (2 Gamma(3))
WENDLAND_DELTA = 9.0 * math.gamma(2.5) / (2.0 * math.gamma(3.0))


def wendland_c6(r):
    """(max(1 - r, 0))^6 (35 r^2 + 18 r + 3)"""
    r = np.asarray(r, dtype=float)
    return np.maximum(1.0 - r, 0.0) ** 6 * (35.0 * r * r + 18.0 * r + 3.0)


def gaussian_bump(x):
    return np.exp(-x[:, 0] ** 2)


def poisson_solution(x):
    x1, x2 = x[:, 0], x[:, 1]
    return (1.0 - x1 * x1 - x2 * x2) * np.exp(x1 * np.cos(x2))


def wendland_sum(x, centers=OCTAHEDRON):
    c = np.asarray(centers, dtype=float)
    r = np.linalg.norm(x[:, None, :] - c[None, :, :], axis=2)
    return wendland_c6(r / WENDLAND_DELTA).sum(axis=1) / 3.0


def flat_exponential(x):
    r2 = np.sum(x * x, axis=1)
    with np.errstate(divide="ignore"):
        return np.where(r2 > 0, np.exp(-1.0 / np.where(r2 > 0, r2, 1.0)), 0.0)


@dataclass(frozen=True)
class TestFunction:
    name: str
    func: Callable[[np.ndarray], np.ndarray]
    domains: frozenset

    def __call__(self, x):
        return self.func(np.asarray(x, dtype=float))


REGISTRY = {
    "gaussian": TestFunction("gaussian", gaussian_bump, frozenset({DomainKind.INTERVAL})),
    "poisson": TestFunction("poisson", poisson_solution, frozenset({DomainKind.DISK, DomainKind.UNION_OF_DISKS})),
    "wendland": TestFunction("wendland", wendland_sum, frozenset({DomainKind.SPHERE})),
    "flat-exp": TestFunction("flat-exp", flat_exponential, frozenset({DomainKind.CUBE})),
}

DEFAULT_FUNCTION = {
    DomainKind.INTERVAL: "gaussian",
    DomainKind.DISK: "poisson",
    DomainKind.SPHERE: "wendland",
    DomainKind.CUBE: "flat-exp",
    DomainKind.UNION_OF_DISKS: "poisson",
}


# ---------------------------------------------------------------------------
# configuration


PAPER_DEFAULTS = {
    "interval": dict(degree=250, sigma=0.4, impulse=0.0, lambda_indices=[5, 10, 50, 100]),
    "disk": dict(degree=16, sigma=0.0, impulse=0.5, lambda_indices=[5, 10, 50, 100]),
    "sphere": dict(degree=15, sigma=0.02, impulse=0.02, lambda_indices=[5, 50, 100, 200]),
    "cube": dict(degree=20, sigma=0.2, impulse=0.0, lambda_indices=[5, 10, 50, 100]),
    "union": dict(degree=15, sigma=0.075, impulse=0.0, lambda_indices=[10, 20, 40, 80]),
}

ALL_VARIANTS = ["tikhonov", "filtered", "lasso", "hybrid", "hard", "plain"]


@dataclass
class ExperimentConfig:
    domain: str = "interval"
    degree: int = 250
    test_function: str | None = None
    sigma: float = 0.4
    impulse: float = 0.0
    impulse_whole_vector: bool = False
    seed: int = 0
    trials: int = 100
    variants: list = field(default_factory=lambda: list(ALL_VARIANTS))
    lambda_indices: list = field(default_factory=lambda: [5, 10, 50, 100])
    s_start: int = 1
    s_stop: int = 100
    s_step: int = 1
    design_file: str | None = None
    eval_design_file: str | None = None
    eval_degree: int | None = None
    union_radii: list = field(default_factory=lambda: [2.0, 4.0])
    union_disks_per_ring: int = 19
    union_shrink: float = 8.0
    sphere_centers: list = field(default_factory=lambda: [list(c) for c in OCTAHEDRON])
    out: str | None = None

    @classmethod
    def for_domain(cls, domain: str, **overrides) -> "ExperimentConfig":
        if domain not in PAPER_DEFAULTS:
            raise ConfigError(f"unknown domain {domain!r}")
        kw = dict(PAPER_DEFAULTS[domain])
        kw.update(overrides)
        return cls(domain=domain, **kw)

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        d = {k.replace("-", "_"): v for k, v in d.items()}
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(d) - names
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        base = cls.for_domain(d["domain"]) if "domain" in d else cls()
        return dataclasses.replace(base, **d)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @property
    def noise(self) -> NoiseSpec:
        return NoiseSpec(self.sigma, self.impulse, self.seed, self.impulse_whole_vector)

    def make_domain(self) -> Domain:
        if self.domain == "union":
            return two_rings_domain(tuple(self.union_radii), self.union_disks_per_ring, self.union_shrink)
        try:
            return {"interval": INTERVAL, "disk": DISK, "sphere": SPHERE, "cube": CUBE}[self.domain]
        except KeyError:
            raise ConfigError(f"unknown domain {self.domain!r}") from None

    def test_function_for(self, domain: Domain) -> TestFunction:
        name = self.test_function or DEFAULT_FUNCTION[domain.kind]
        if name not in REGISTRY:
            raise ConfigError(f"unknown test function {name!r}; known: {sorted(REGISTRY)}")
        tf = REGISTRY[name]
        if domain.kind not in tf.domains:
            raise ConfigError(f"test function {name!r} is not defined for the {domain.kind.value} domain")
        if name == "wendland":
            centers = tuple(tuple(float(v) for v in c) for c in self.sphere_centers)
            return TestFunction(name, lambda x: wendland_sum(x, centers), tf.domains)
        return tf

    def validate(self):
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.degree < 1:
            raise ConfigError("degree must be >= 1")
        for v in self.variants:
            try:
                Variant(v)
            except ValueError:
                raise ConfigError(f"unknown variant {v!r}") from None
        if self.sigma < 0 or self.impulse < 0:
            raise ConfigError("noise levels must be nonnegative")
        if self.s_start < 1 or self.s_step < 1 or self.s_stop < self.s_start:
            raise ConfigError("bad lambda sweep range")


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Problem:
    domain: Domain
    L: int
    rule: QuadratureRule
    basis: BasisSpec
    vandermonde: VandermondeMatrix
    filt: FilterFunction
    f_nodes: np.ndarray
    eval_rule: QuadratureRule
    eval_matrix: np.ndarray
    f_eval: np.ndarray

    @property
    def d(self) -> int:
        return self.basis.d


def setup_problem(config: ExperimentConfig) -> Problem:
    config.validate()
    domain = config.make_domain()
    L = config.degree
    tf = config.test_function_for(domain)
    rule = default_rule(domain, L, config.design_file)
    basis = build_basis(domain, L, rule)
    V = vandermonde(basis, rule)
    if config.eval_degree is not None:
        eval_rule = default_rule(domain, config.eval_degree // 2, None)
    else:
        eval_rule = evaluation_rule(domain, L, config.eval_design_file)
    if eval_rule.exactness <= 2 * L:
        raise ConfigError(f"evaluation rule exactness {eval_rule.exactness} must exceed 2L = {2 * L}")
    return Problem(
        domain=domain,
        L=L,
        rule=rule,
        basis=basis,
        vandermonde=V,
        filt=FilterFunction.for_basis(basis),
        f_nodes=tf(rule.nodes),
        eval_rule=eval_rule,
        eval_matrix=evaluate_basis(basis, eval_rule.nodes),
        f_eval=tf(eval_rule.nodes),
    )


def _noisy_coefficients(problem: Problem, spec: NoiseSpec, trial: int):
    eps = generate(spec, len(problem.rule), trial)
    w = problem.rule.weights
    A = problem.vandermonde.values
    alpha = A.T @ (w * (problem.f_nodes + eps))
    return alpha, eps


def _errors(problem: Problem, C: np.ndarray) -> np.ndarray:
    R = problem.eval_matrix @ C - problem.f_eval[:, None]
    return np.sqrt(problem.eval_rule.weights @ (R * R))


TABLE_COLUMNS = ["variant", "lambda_index", "lambda_value", "mean_error", "std_error", "mean_sparsity"]


def run_experiment(config: ExperimentConfig, problem: Problem | None = None) -> list[dict]:
    """Mean L2 error and sparsity per (variant, lambda index) over the trial battery."""
    problem = setup_problem(config) if problem is None else problem
    variants = [Variant(v) for v in config.variants]
    for s in config.lambda_indices:
        if not 1 <= s <= problem.d:
            raise ConfigError(f"lambda index {s} outside 1..{problem.d}")
    spec = config.noise
    S = len(config.lambda_indices)
    err = np.zeros((config.trials, len(variants), S))
    nnz = np.zeros_like(err)
    lam = np.zeros((config.trials, S))
    for t in range(config.trials):
        alpha, _ = _noisy_coefficients(problem, spec, t)
        sched = lambda_schedule(alpha)
        cols = []
        for j, s in enumerate(config.lambda_indices):
            lam[t, j] = sched(s)
            for v in variants:
                cols.append(estimate_coeffs(v, alpha, lam[t, j], problem.filt.values))
        C = np.stack(cols, axis=1)
        e = _errors(problem, C).reshape(S, len(variants))
        err[t] = e.T
        nnz[t] = np.count_nonzero(C, axis=0).reshape(S, len(variants)).T
    rows = []
    for i, v in enumerate(variants):
        for j, s in enumerate(config.lambda_indices):
            rows.append(
                dict(
                    variant=v.value,
                    lambda_index=int(s),
                    lambda_value=float(lam[:, j].mean()),
                    mean_error=float(err[:, i, j].mean()),
                    std_error=float(err[:, i, j].std(ddof=1)) if config.trials > 1 else 0.0,
                    mean_sparsity=float(nnz[:, i, j].mean()),
                )
            )
    return rows


SWEEP_COLUMNS = ["variant", "s", "lambda_value", "mean_sparsity", "mean_error", "J", "H", "const", "direct", "max_residual"]


def sweep_lambda(config: ExperimentConfig, problem: Problem | None = None, variants=None) -> list[dict]:
    """Trial-averaged sparsity, L2 error and J/H split along lambda(s), s in the configured range.

    ``max_residual`` is the largest |direct - (J + H + const)| seen over trials.
    """
    problem = setup_problem(config) if problem is None else problem
    variants = [Variant(v) for v in (variants or SPARSE_VARIANTS)]
    s_values = list(range(config.s_start, min(config.s_stop, problem.d) + 1, config.s_step))
    spec = config.noise
    A = problem.vandermonde.values
    w = problem.rule.weights
    f = problem.f_nodes
    const = float(w @ (f * f))
    shape = (len(variants), len(s_values))
    acc = {k: np.zeros(shape) for k in ("lam", "nnz", "err", "J", "H", "direct")}
    max_res = np.zeros(shape)
    for t in range(config.trials):
        alpha, eps = _noisy_coefficients(problem, spec, t)
        eta = A.T @ (w * eps)
        sched = lambda_schedule(alpha)
        cols = []
        for s in s_values:
            for v in variants:
                cols.append(estimate_coeffs(v, alpha, sched(s), problem.filt.values))
        C = np.stack(cols, axis=1)
        R = A @ C - f[:, None]
        direct = (w @ (R * R)).reshape(len(s_values), len(variants)).T
        J = np.sum(C * C - 2.0 * C * alpha[:, None], axis=0).reshape(len(s_values), len(variants)).T
        H = (2.0 * eta @ C).reshape(len(s_values), len(variants)).T
        acc["lam"] += np.array([sched(s) for s in s_values])[None, :]
        acc["nnz"] += np.count_nonzero(C, axis=0).reshape(len(s_values), len(variants)).T
        acc["err"] += _errors(problem, C).reshape(len(s_values), len(variants)).T
        acc["J"] += J
        acc["H"] += H
        acc["direct"] += direct
        max_res = np.maximum(max_res, np.abs(direct - (J + H + const)))
    n = config.trials
    rows = []
    for i, v in enumerate(variants):
        for j, s in enumerate(s_values):
            rows.append(
                dict(
                    variant=v.value,
                    s=s,
                    lambda_value=float(acc["lam"][i, j] / n),
                    mean_sparsity=float(acc["nnz"][i, j] / n),
                    mean_error=float(acc["err"][i, j] / n),
                    J=float(acc["J"][i, j] / n),
                    H=float(acc["H"][i, j] / n),
                    const=const,
                    direct=float(acc["direct"][i, j] / n),
                    max_residual=float(max_res[i, j]),
                )
            )
    return rows


# ---------------------------------------------------------------------------
# output


def rows_to_csv(rows: list[dict], columns: list[str]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\r\n", extrasaction="ignore")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: (repr(float(v)) if isinstance(v, (float, np.floating)) else v) for k, v in row.items()})
    return buf.getvalue()


def write_outputs(rows: list[dict], columns: list[str], config: ExperimentConfig, path, kind: str):
    """CSV at ``path`` plus a JSON sidecar ``<path>.json`` with the resolved config."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(rows_to_csv(rows, columns), encoding="utf-8", newline="")
    sidecar = {"kind": kind, "seed": config.seed, "config": config.to_dict(), "columns": columns}
    Path(str(path) + ".json").write_text(json.dumps(sidecar, indent=2, sort_keys=True) + "\n", encoding="utf-8")
