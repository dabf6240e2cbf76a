"""Hybrid hyperinterpolation: filtered, soft-thresholded polynomial approximation from noisy samples."""

from .analysis import (
    DecompositionTerms,
    H_term,
    J_term,
    K_of_f,
    LambdaSchedule,
    decompose,
    discrete_inner,
    discrete_norm,
    l2_error,
    lambda_schedule,
    sparsity,
)
from .basis import BasisError, BasisSpec, VandermondeMatrix, build_basis, dimension, evaluate_basis, vandermonde
from .estimators import (
    EstimateCoefficients,
    FilterFunction,
    RegularizationParams,
    SampleVector,
    Variant,
    b_coefficients,
    estimate,
    estimate_coeffs,
    hard_threshold,
    hyper_coefficients,
    sine_squared_filter,
    soft_threshold,
)
from .experiments import ConfigError, ExperimentConfig, run_experiment, setup_problem, sweep_lambda
from .noise import NoiseSpec, generate
from .quadrature import (
    CUBE,
    DISK,
    INTERVAL,
    SPHERE,
    Domain,
    DomainKind,
    QuadratureError,
    QuadratureRule,
    cube_rule,
    default_rule,
    disk_polar_rule,
    evaluation_rule,
    gauss_legendre,
    sphere_product_rule,
    two_rings_domain,
    union_disks_rule,
)

__version__ = "0.1.0"
