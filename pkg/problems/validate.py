"""Structural validation of problem definitions."""

import logging
import warnings
from dataclasses import replace

import numpy as np

from common.errors import NumericalWarning, ValidationError
from common.expr import add
from problems.evaluate import eval_coeff, eval_kernel
from problems.spec import CoeffMatrix, DiscreteTerm, KernelTerm, ProblemKind, ProblemSpec

logger = logging.getLogger(__name__)

PERIODIC_TOL = 1e-10
PERIODIC_SAMPLES = 100
KERNEL_SAMPLES = 64
DELAY_TOL = 1e-12


def _check_shape(matrix: CoeffMatrix, dim: int, key_path: str):
    if len(matrix.entries) != dim or any(len(row) != dim for row in matrix.entries):
        raise ValidationError(f"expected a {dim}x{dim} matrix", key_path)


def _check_variables(matrix: CoeffMatrix, allowed, key_path: str):
    extra = matrix.variables() - set(allowed)
    if extra:
        raise ValidationError(f"variable(s) {', '.join(sorted(extra))} not allowed here", key_path)


def _merge_discrete(terms, max_delay):
    tol = DELAY_TOL * max(1.0, max_delay)
    for k, term in enumerate(terms):
        if not term.delay > 0:
            raise ValidationError(f"delay must be positive, got {term.delay}", f"problem.discrete[{k}].delay")
        if term.delay > max_delay + tol:
            raise ValidationError(f"delay exceeds max_delay ({term.delay} > {max_delay})",
                                  f"problem.discrete[{k}].delay")
    delays = [term.delay for term in terms]
    if delays != sorted(delays):
        logger.warning("discrete delays %s were not sorted; sorting them", delays)
        warnings.warn("discrete delays were not sorted", NumericalWarning, stacklevel=3)
    merged = []
    for term in sorted(terms, key=lambda term: term.delay):
        if merged and abs(term.delay - merged[-1].delay) <= tol:
            previous = merged[-1]
            logger.warning("merging two terms with delay %s", term.delay)
            entries = tuple(
                tuple(add(a, b) for a, b in zip(row_a, row_b))
                for row_a, row_b in zip(previous.B.entries, term.B.entries)
            )
            merged[-1] = DiscreteTerm(previous.delay, CoeffMatrix(entries))
        else:
            merged.append(term)
    return tuple(merged)


def _check_kernels(kernels, max_delay):
    tol = DELAY_TOL * max(1.0, max_delay)
    for k, term in enumerate(kernels):
        lo, hi = term.support
        key = f"problem.kernels[{k}].support"
        if not lo < hi:
            raise ValidationError(f"empty support [{lo}, {hi}]", key)
        if lo < -max_delay - tol or hi > tol:
            raise ValidationError(f"support [{lo}, {hi}] outside [{-max_delay}, 0]", key)
    ordered = tuple(sorted(kernels, key=lambda term: term.support))
    for left, right in zip(ordered, ordered[1:]):
        if right.support[0] < left.support[1] - tol:
            raise ValidationError(f"kernel supports {left.support} and {right.support} overlap", "problem.kernels")
    return ordered


def _check_periodic(p: ProblemSpec):
    rng = np.random.default_rng(0)
    samples = rng.uniform(0.0, p.period, PERIODIC_SAMPLES)
    matrices = [("problem.A", p.A)] if p.A is not None else []
    matrices += [(f"problem.discrete[{k}].B", term.B) for k, term in enumerate(p.discrete)]
    for key, matrix in matrices:
        if "t" not in matrix.variables():
            continue
        for t in samples:
            a, b = eval_coeff(matrix, t), eval_coeff(matrix, t + p.period)
            if np.max(np.abs(a - b)) > PERIODIC_TOL * max(1.0, np.max(np.abs(a))):
                raise ValidationError(f"coefficient is not {p.period}-periodic (t={t:.6g})", key)
    for k, term in enumerate(p.kernels):
        if "t" not in term.C.variables():
            continue
        theta = np.linspace(term.support[0], term.support[1], 9)
        for t in samples[:20]:
            a, b = eval_kernel(term.C, t, theta), eval_kernel(term.C, t + p.period, theta)
            if np.max(np.abs(a - b)) > PERIODIC_TOL * max(1.0, np.max(np.abs(a))):
                raise ValidationError(f"kernel is not {p.period}-periodic (t={t:.6g})", f"problem.kernels[{k}].C")


def _kernel_bound(p: ProblemSpec) -> float:
    horizon = p.period if p.period is not None else p.max_delay
    times = np.linspace(0.0, horizon, KERNEL_SAMPLES)
    gamma = 0.0
    for term in p.kernels:
        theta = np.linspace(term.support[0], term.support[1], KERNEL_SAMPLES)
        for t in times:
            values = eval_kernel(term.C, t, theta)
            gamma = max(gamma, float(np.max(np.abs(values).sum(axis=2))))
    return gamma


def validate(raw: ProblemSpec) -> ProblemSpec:
    """
    Check a problem for structural consistency and return its normal form.

    The normal form has discrete delays sorted ascending with equal delays merged,
    kernels sorted by support, and the sampled kernel bound gamma filled in.
    Running validate on its own output returns an equal problem.

    Raises:
        ValidationError: On mismatched dimensions, tau <= 0, a delay above tau,
            a largest delay different from tau, bad kernel supports, terms that
            do not belong to the problem kind, or failed periodicity sampling.
    """
    if raw.dim < 1:
        raise ValidationError(f"dim must be positive, got {raw.dim}", "problem.dim")
    if not (np.isfinite(raw.max_delay) and raw.max_delay > 0):
        raise ValidationError(f"max_delay must be positive, got {raw.max_delay}", "problem.max_delay")
    if raw.period is not None and not raw.period > 0:
        raise ValidationError(f"period must be positive, got {raw.period}", "problem.period")

    if raw.kind is ProblemKind.RE:
        if raw.A is not None or raw.discrete:
            raise ValidationError("a renewal equation has no A or discrete terms", "problem")
        if not raw.kernels:
            raise ValidationError("a renewal equation needs at least one kernel", "problem.kernels")
    if raw.A is not None:
        _check_shape(raw.A, raw.dim, "problem.A")
        _check_variables(raw.A, ("t",), "problem.A")
    for k, term in enumerate(raw.discrete):
        _check_shape(term.B, raw.dim, f"problem.discrete[{k}].B")
        _check_variables(term.B, ("t",), f"problem.discrete[{k}].B")
    for k, term in enumerate(raw.kernels):
        _check_shape(term.C, raw.dim, f"problem.kernels[{k}].C")
        _check_variables(term.C, ("t", "theta"), f"problem.kernels[{k}].C")

    discrete = _merge_discrete(raw.discrete, raw.max_delay)
    kernels = _check_kernels(raw.kernels, raw.max_delay)
    reach = [term.delay for term in discrete] + [-term.support[0] for term in kernels]
    if reach and abs(max(reach) - raw.max_delay) > DELAY_TOL * max(1.0, raw.max_delay):
        raise ValidationError(f"largest delay {max(reach)} differs from max_delay {raw.max_delay}", "problem.max_delay")

    p = replace(raw, discrete=discrete, kernels=tuple(KernelTerm(term.C) for term in kernels))
    if p.period is not None:
        _check_periodic(p)
    if p.kernels:
        gamma = _kernel_bound(p)
        logger.info("sampled kernel bound gamma = %.6g for %s", gamma, p.label or p.kind.value)
        p = replace(p, kernel_bound=gamma)
    return p
