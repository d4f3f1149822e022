"""Invariant suite run by the ``check`` command on one configured problem."""

import logging
from dataclasses import dataclass, replace
from typing import List, Optional

import numpy as np

from discretize.config import Method
from discretize.context import build_context
from discretize.reduce import build_evolution_matrix
from discretize.rows import fs_row
from oracles.bruteforce import monodromy_bruteforce
from oracles.roots import char_roots
from problems.evaluate import is_autonomous
from spectra.clusters import dominant_cluster
from spectra.eig import eig_dense

logger = logging.getLogger(__name__)

PROJECTION_TOL = 1e-12
PROJECTION_SAMPLES = 100
FIXED_POINT_TOL = 1e-9
RESIDUAL_TOL = 1e-8
SEMIGROUP_TOL = 1e-6
ROOT_TOL = 1e-6
BRUTEFORCE_TOL = 1e-4
# multipliers below this modulus are not compared with characteristic roots
ROOT_MODULUS_FLOOR = 0.1


@dataclass(frozen=True)
class CheckResult:
    """
    Outcome of one invariant.

    Attributes:
        name (str): Invariant name.
        status (str): "pass", "fail" or "skip".
        value (float | None): Measured quantity.
        tolerance (float | None): Bound it was held to.
        detail (str): Reason for a skip or extra context.
    """

    name: str
    status: str
    value: Optional[float] = None
    tolerance: Optional[float] = None
    detail: str = ""

    @property
    def failed(self) -> bool:
        return self.status == "fail"


def _bounded(name, value, tolerance, detail=""):
    status = "pass" if value <= tolerance else "fail"
    return CheckResult(name, status, float(value), tolerance, detail)


def _nearest_distance(values, target):
    return float(np.min(np.abs(np.asarray(values) - target)))


def _dominant_cluster(spectrum):
    return [complex(spectrum.eigenvalues[k]) for k in dominant_cluster(spectrum).members]


def check_projections(problem, cfg, rng) -> CheckResult:
    """R P = I on both bases for random coefficient vectors."""
    ctx = build_context(problem, cfg)
    worst = 0.0
    for basis in (ctx.x_basis, ctx.z_basis):
        for _ in range(PROJECTION_SAMPLES):
            coeffs = rng.normal(size=basis.size)
            back = basis.restrict(lambda x, anchor: basis.prolong(coeffs, x, anchor))
            worst = max(worst, float(np.max(np.abs(back - coeffs))) / max(1.0, float(np.max(np.abs(coeffs)))))
    return _bounded("projection", worst, PROJECTION_TOL)


def check_fixed_point(problem, cfg, result, rng) -> CheckResult:
    """The reduced unknown solves the collocation equations at independently rebuilt rows."""
    if cfg.method is Method.WEIGHTED_RESIDUALS:
        return CheckResult("fixed_point", "skip", detail="collocation methods only")
    ctx = build_context(problem, cfg)
    phi = rng.normal(size=ctx.x_size)
    z = result.z_operator @ phi
    image = np.concatenate([fs_row(ctx, float(t)).apply(phi, z) for t in ctx.z_basis.nodes])
    scale = max(1.0, float(np.max(np.abs(z))))
    return _bounded("fixed_point", float(np.max(np.abs(z - image))) / scale, FIXED_POINT_TOL)


def _doubled(cfg):
    pieces = None if cfg.pieces is None else tuple(2.0 * x for x in cfg.pieces)
    return replace(cfg, h=2.0 * cfg.h, pieces=pieces)


def check_semigroup(problem, cfg, spectrum) -> CheckResult:
    """Squares of the dominant multipliers of T(h) are multipliers of T(2h)."""
    periodic = problem.period is not None and abs(cfg.h / problem.period - round(cfg.h / problem.period)) <= 1e-12
    if not (is_autonomous(problem) or periodic):
        return CheckResult("semigroup", "skip", detail="h is not a multiple of the period")
    doubled = eig_dense(build_evolution_matrix(problem, _doubled(cfg)).data)
    worst = max(_nearest_distance(doubled.eigenvalues, v * v) / max(1.0, abs(v * v))
                for v in _dominant_cluster(spectrum))
    return _bounded("semigroup", worst, SEMIGROUP_TOL)


def check_char_roots(problem, cfg, spectrum, reference) -> CheckResult:
    """Every characteristic root in the region shows up as the multiplier exp(lambda h)."""
    if reference is None or reference.kind != "char-roots" or not is_autonomous(problem):
        return CheckResult("char_roots", "skip", detail="no characteristic-root reference")
    roots = char_roots(problem, reference.region)
    multipliers = [np.exp(z * cfg.h) for z in roots]
    multipliers = [m for m in multipliers if abs(m) >= ROOT_MODULUS_FLOOR]
    if not multipliers:
        return CheckResult("char_roots", "skip", detail="no root with a visible multiplier")
    worst = max(_nearest_distance(spectrum.eigenvalues, m) for m in multipliers)
    return _bounded("char_roots", worst, ROOT_TOL, f"{len(multipliers)} roots")


def check_bruteforce(problem, cfg, spectrum, reference) -> CheckResult:
    """The dominant multipliers agree with a brute-force monodromy matrix."""
    if reference is None or reference.kind != "bruteforce":
        return CheckResult("bruteforce", "skip", detail="no brute-force reference")
    brute = eig_dense(monodromy_bruteforce(problem, cfg.h, reference.M, reference.steps, cfg.s))
    worst = max(_nearest_distance(brute.eigenvalues, v) for v in _dominant_cluster(spectrum))
    return _bounded("bruteforce", worst, BRUTEFORCE_TOL)


def run_checks(spec, seed: int = 0) -> List[CheckResult]:
    """
    Run the invariant suite on the problem and discretization of a RunSpec.

    Parameters:
        spec (RunSpec): Parsed run document.
        seed (int): Seed of the random vectors used by the projection and
            fixed-point checks.

    Returns:
        list[CheckResult]: One entry per invariant, in a fixed order.
    """
    rng = np.random.default_rng(seed)
    problem, cfg = spec.problem, spec.disc
    result = build_evolution_matrix(problem, cfg)
    spectrum = eig_dense(result.data)

    results = [
        check_projections(problem, cfg, rng),
        CheckResult("well_posed", "pass" if np.isfinite(result.condition_estimate) else "fail",
                    result.condition_estimate),
        check_fixed_point(problem, cfg, result, rng),
        _bounded("eig_residual", float(np.max(spectrum.residuals)), RESIDUAL_TOL),
        check_semigroup(problem, cfg, spectrum),
        check_char_roots(problem, cfg, spectrum, spec.reference),
        check_bruteforce(problem, cfg, spectrum, spec.reference),
    ]
    for item in results:
        level = logging.WARNING if item.failed else logging.INFO
        logger.log(level, "check %s: %s (value %s, tolerance %s)", item.name, item.status, item.value, item.tolerance)
    return results
