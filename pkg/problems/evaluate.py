"""Coefficient evaluation and the characteristic matrix of autonomous problems."""

import numpy as np

from common.errors import CoefficientError, ExprDomainError
from grids.quadrature import clenshaw_curtis
from problems.spec import CoeffMatrix, KernelMatrix, ProblemKind, ProblemSpec

CHARACTERISTIC_QUAD_POINTS = 64


def _entry_values(expr, t, theta, shape, position):
    try:
        with np.errstate(over="ignore", invalid="ignore"):
            value = expr.evaluate({"t": t, "theta": theta})
    except ExprDomainError as e:
        raise CoefficientError(str(e), t, position) from e
    value = np.broadcast_to(np.asarray(value, dtype=float), shape)
    if not np.all(np.isfinite(value)):
        raise CoefficientError("non-finite value", t, position)
    return value


def eval_coeff(c: CoeffMatrix, t: float) -> np.ndarray:
    """
    Evaluate a coefficient matrix entry-wise at time t.

    Returns:
        np.ndarray: d x d real matrix.

    Raises:
        CoefficientError: If an entry hits a domain error or is not finite,
            naming t and the (row, column) of the entry.
    """
    d = c.dim
    out = np.empty((d, d))
    for i, row in enumerate(c.entries):
        for j, entry in enumerate(row):
            out[i, j] = _entry_values(entry, t, 0.0, (), (i, j))
    return out


def eval_kernel(c: KernelMatrix, t: float, theta) -> np.ndarray:
    """
    Sample a kernel matrix at time t and an array of offsets.

    Returns:
        np.ndarray: Shape (len(theta), d, d).
    """
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    d = c.dim
    out = np.empty((theta.size, d, d))
    for i, row in enumerate(c.entries):
        for j, entry in enumerate(row):
            out[:, i, j] = _entry_values(entry, t, theta, theta.shape, (i, j))
    return out


def is_autonomous(p: ProblemSpec) -> bool:
    """True when no coefficient depends on t."""
    matrices = [term.B for term in p.discrete] + [term.C for term in p.kernels]
    if p.A is not None:
        matrices.append(p.A)
    return all("t" not in m.variables() for m in matrices)


def _kernel_transform(p: ProblemSpec, lam: complex) -> np.ndarray:
    total = np.zeros((p.dim, p.dim), dtype=complex)
    for term in p.kernels:
        lo, hi = term.support
        rule = clenshaw_curtis(CHARACTERISTIC_QUAD_POINTS, lo, hi)
        values = eval_kernel(term.C, 0.0, rule.points)
        total += np.einsum("q,qij->ij", rule.weights * np.exp(lam * rule.points), values)
    return total


def characteristic_matrix(p: ProblemSpec, lam: complex) -> np.ndarray:
    """
    Characteristic matrix Delta(lambda) of an autonomous problem.

    RFDE: lambda I - A - sum_k B_k exp(-lambda tau_k) - sum_k int C_k(theta) exp(lambda theta).
    RE:   I - sum_k int C_k(theta) exp(lambda theta).

    Raises:
        ValueError: If some coefficient depends on t.
    """
    if not is_autonomous(p):
        raise ValueError("characteristic matrix needs an autonomous problem")
    lam = complex(lam)
    eye = np.eye(p.dim, dtype=complex)
    if p.kind is ProblemKind.RE:
        return eye - _kernel_transform(p, lam)
    delta = lam * eye
    if p.A is not None:
        delta -= eval_coeff(p.A, 0.0)
    for term in p.discrete:
        delta -= eval_coeff(term.B, 0.0) * np.exp(-lam * term.delay)
    return delta - _kernel_transform(p, lam)
