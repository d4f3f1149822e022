"""Reduction of the blocks to the evolution matrix T = T1 + T2 (I - U2)^{-1} U1."""

import logging
import warnings
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy.linalg import get_lapack_funcs, lu_solve

from common.errors import NumericalError, NumericalWarning, SingularSystemError
from discretize.assemble import Blocks, assemble_blocks, assemble_weighted_residuals
from discretize.config import DiscConfig, Method
from discretize.context import build_context
from problems.spec import ProblemSpec

logger = logging.getLogger(__name__)

SINGULAR_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class EvolutionMatrix:
    """
    Finite approximation of T = U(s + h, s) on the X grid.

    Attributes:
        data (np.ndarray): Dense square matrix.
        config (DiscConfig): Settings it was built with.
        condition_estimate (float): 1-norm condition estimate of I - U2.
        warnings (tuple[str, ...]): Conditioning notices raised during the solve.
        z_operator (np.ndarray): (I - U2)^{-1} U1, mapping Phi to the X+ unknown Z.
    """

    data: np.ndarray
    config: DiscConfig
    condition_estimate: float
    warnings: Tuple[str, ...]
    z_operator: np.ndarray

    @property
    def size(self) -> int:
        return self.data.shape[0]


def _condition_estimate(lu: np.ndarray, norm: float) -> float:
    if np.any(np.diag(lu) == 0):
        return float("inf")
    gecon, = get_lapack_funcs(("gecon",), (lu,))
    rcond, info = gecon(lu, norm, norm="1")
    if info != 0 or rcond <= 0:
        return float("inf")
    return float(1.0 / rcond)


def solve_reduced(b: Blocks) -> EvolutionMatrix:
    """
    Form T1 + T2 (I - U2)^{-1} U1 without inverting I - U2.

    I - U2 is factored once by LU with partial pivoting (LAPACK getrf; safe
    to call from sweep threads); its 1-norm condition number is estimated
    from the factors.

    Raises:
        SingularSystemError: If a pivot of I - U2 is below 1e-12 times its 1-norm.
        NumericalError: If U2 or the result is not finite.
    """
    n = b.U2.shape[0]
    system = np.eye(n) - b.U2
    norm = float(np.linalg.norm(system, 1))
    if not np.all(np.isfinite(system)):
        raise NumericalError("I - U2 has non-finite entries")
    getrf, = get_lapack_funcs(("getrf",), (system,))
    lu, piv, info = getrf(system)
    if info < 0:
        raise NumericalError(f"LU factorization rejected argument {-info}")
    if np.min(np.abs(np.diag(lu))) <= SINGULAR_TOL * norm:
        raise SingularSystemError("I - U2 is singular to working precision", _condition_estimate(lu, norm))
    condition = _condition_estimate(lu, norm)

    notices = []
    radius = float(np.max(np.abs(np.linalg.eigvals(b.U2)))) if n else 0.0
    if radius >= 1.0:
        notices.append(f"spectral radius of U2 is {radius:.3g} >= 1; N may be below the invertibility threshold")
    if not np.isfinite(condition) or condition > 1.0 / np.finfo(float).eps ** 0.5:
        notices.append(f"I - U2 is ill-conditioned (estimate {condition:.3e})")
    for notice in notices:
        logger.warning(notice)
        warnings.warn(notice, NumericalWarning, stacklevel=2)

    z_operator = lu_solve((lu, piv), b.U1)
    data = b.T1 + b.T2 @ z_operator
    if not np.all(np.isfinite(data)):
        raise NumericalError("evolution matrix has non-finite entries")
    logger.debug("reduced to size %d, condition estimate %.3e", data.shape[0], condition)
    return EvolutionMatrix(data, b.config, condition, tuple(notices), z_operator)


def assemble(problem: ProblemSpec, cfg: DiscConfig) -> Blocks:
    """Build the context and the blocks for whatever method cfg names."""
    ctx = build_context(problem, cfg)
    if cfg.method is Method.WEIGHTED_RESIDUALS:
        return assemble_weighted_residuals(ctx)
    return assemble_blocks(ctx)


def build_evolution_matrix(problem: ProblemSpec, cfg: DiscConfig) -> EvolutionMatrix:
    """Context, blocks and reduction in one call."""
    return solve_reduced(assemble(problem, cfg))
