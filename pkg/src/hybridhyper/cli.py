"""Command line interface: ``run``, ``sweep``, ``validate`` and ``designs fetch-info``.

Exit codes: 0 success, 2 configuration error, 3 numerical validation failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from .basis import GRAM_TOL, BasisError, build_basis, vandermonde
from .experiments import (
    SWEEP_COLUMNS,
    TABLE_COLUMNS,
    ConfigError,
    ExperimentConfig,
    rows_to_csv,
    run_experiment,
    sweep_lambda,
    write_outputs,
)
from .quadrature import (
    DomainKind,
    QuadratureError,
    QuadratureRule,
    cube_chebyshev_report,
    default_rule,
    monomial_report,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

VALIDATE_DEFAULTS = {"interval": 250, "disk": 16, "sphere": 15, "cube": 20, "union": 15}

DESIGN_FORMAT = """\
Spherical design files
----------------------
Plain text, one point per line, three whitespace-separated floats x y z with
x^2 + y^2 + z^2 = 1 (to 1e-8). Blank lines and lines starting with '#' are
ignored. All points receive the equal weight 4*pi/N.

A design used for degree-L hyperinterpolation must integrate every spherical
harmonic of degree <= 2L exactly; this is checked when the file is loaded and
the offending (degree, order) is reported on failure. The evaluation rule
passed with --eval-design-file must be exact beyond 2L.

Suitable files are the symmetric spherical t-designs with N = t^2/2 + t + O(1)
points, e.g. a degree-30 design (about 482 points) for L = 15 and a degree-50
design (about 1302 points) for evaluation. They are not bundled; without a
file the sphere falls back to a Gauss-Legendre x trapezoid product rule.
"""


def _add_config_flags(p: argparse.ArgumentParser):
    p.add_argument("--config", type=Path, help="JSON config file; flags override its keys")
    p.add_argument("--domain", choices=sorted(VALIDATE_DEFAULTS))
    p.add_argument("--degree", type=int)
    p.add_argument("--test-function")
    p.add_argument("--sigma", type=float)
    p.add_argument("--impulse", type=float)
    p.add_argument("--impulse-whole-vector", action="store_true", default=None)
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--lambda-index", type=int, nargs="+", dest="lambda_indices")
    p.add_argument("--variants", nargs="+")
    p.add_argument("--design-file")
    p.add_argument("--eval-design-file")
    p.add_argument("--eval-degree", type=int)
    p.add_argument("--out", help="CSV output path (a .json sidecar is written next to it); stdout if omitted")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hybridhyper", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="mean L2 error table over a seeded trial battery")
    _add_config_flags(run)

    sweep = sub.add_parser("sweep", help="sparsity / error / J / H series along lambda(s)")
    _add_config_flags(sweep)
    sweep.add_argument("--s-start", type=int)
    sweep.add_argument("--s-stop", type=int)
    sweep.add_argument("--s-step", type=int)

    val = sub.add_parser("validate", help="quadrature exactness and Gram identity checks")
    val.add_argument("--domain", choices=sorted(VALIDATE_DEFAULTS), nargs="+")
    val.add_argument("--degree", type=int, help="degree L (default: the experiment degree per domain)")
    val.add_argument("--design-file")
    val.add_argument("--tol", type=float, default=GRAM_TOL)

    designs = sub.add_parser("designs", help="spherical design file helpers")
    dsub = designs.add_subparsers(dest="designs_command", required=True)
    dsub.add_parser("fetch-info", help="print the expected design file format")
    return parser


def resolve_config(args: argparse.Namespace) -> ExperimentConfig:
    raw: dict = {}
    if args.config is not None:
        try:
            raw = json.loads(args.config.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(raw, dict):
            raise ConfigError("config file must hold a JSON object")
        raw = {k.replace("-", "_"): v for k, v in raw.items()}
    skip = {"command", "config"}
    overrides = {k: v for k, v in vars(args).items() if k not in skip and v is not None}
    raw.update(overrides)
    try:
        cfg = ExperimentConfig.from_dict(raw)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None
    cfg.validate()
    return cfg


def _emit(rows, columns, cfg: ExperimentConfig, kind: str):
    if cfg.out:
        write_outputs(rows, columns, cfg, cfg.out, kind)
        print(f"wrote {cfg.out} ({len(rows)} rows)", file=sys.stderr)
    else:
        sys.stdout.write(rows_to_csv(rows, columns))


def _rule_report(rule: QuadratureRule, degree: int):
    kind = rule.domain.kind
    if kind is DomainKind.CUBE:
        return cube_chebyshev_report(rule, degree), 1e-10
    if kind is DomainKind.SPHERE:
        from .basis import real_spherical_harmonics
        from .quadrature import validate_exactness

        m = np.zeros((degree + 1) ** 2)
        m[0] = np.sqrt(4.0 * np.pi)
        return validate_exactness(rule, lambda x: real_spherical_harmonics(x, degree), m), 1e-10
    if kind is DomainKind.UNION_OF_DISKS:
        scale = float(np.abs(rule.domain.bounding_box()).max())
        return monomial_report(rule, degree, scale), 1e-9
    return monomial_report(rule, min(degree, 60)), 1e-10


def validate(domains, degree: int | None, design_file=None, tol: float = GRAM_TOL, out=None) -> bool:
    """Exactness, node membership and Gram checks; returns True when all pass."""
    out = sys.stdout if out is None else out
    ok = True
    for name in domains:
        t0 = time.perf_counter()
        cfg = ExperimentConfig.for_domain(name)
        L = degree if degree is not None else VALIDATE_DEFAULTS[name]
        domain = cfg.make_domain()
        rule = default_rule(domain, L, design_file if name == "sphere" else None)
        rep, qtol = _rule_report(rule, 2 * L)
        inside = bool(np.all(domain.contains(rule.nodes, 1e-12)))
        basis = build_basis(domain, L, rule)
        gram = vandermonde(basis, rule).gram_deviation()
        passed = rep.passed(qtol) and inside and gram <= tol
        ok &= passed
        print(
            f"{'PASS' if passed else 'FAIL'} {name:8s} L={L:<4d} N={len(rule):<6d} d={basis.d:<6d} "
            f"exactness_dev={rep.max_deviation:.2e} nodes_inside={inside} "
            f"gram_dev={gram:.2e} ({time.perf_counter() - t0:.1f}s)",
            file=out,
        )
    return ok


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code not in (0, None) else EXIT_OK
    try:
        if args.command == "designs":
            print(DESIGN_FORMAT, end="")
            return EXIT_OK
        if args.command == "validate":
            doms = args.domain or list(VALIDATE_DEFAULTS)
            return EXIT_OK if validate(doms, args.degree, args.design_file, args.tol) else EXIT_NUMERICAL
        cfg = resolve_config(args)
        if args.command == "run":
            _emit(run_experiment(cfg), TABLE_COLUMNS, cfg, "table")
        else:
            _emit(sweep_lambda(cfg), SWEEP_COLUMNS, cfg, "sweep")
        return EXIT_OK
    except (ConfigError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (QuadratureError, BasisError) as exc:
        print(f"numerical validation failed: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
