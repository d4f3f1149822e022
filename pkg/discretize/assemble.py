"""Assembly of the four blocks T1, T2, U1, U2.

Rows of [T1 | T2] restrict V(P Phi, P+ Z)(h + theta) to the X grid; rows of
[U1 | U2] reduce F_s V(P Phi, P+ Z) on [0, h], by collocation at the X+ nodes
or by projection on the Legendre basis.
"""

import logging
from dataclasses import dataclass
from typing import Union

import numpy as np

from discretize.basis import LegendreBasis, PiecewiseBasis
from discretize.config import DiscConfig, Method
from discretize.context import DiscContext
from discretize.rows import RANGE_TOL, blocked, fs_row, scalar_rows
from grids.quadrature import gauss_legendre
from problems.spec import ProblemKind

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Blocks:
    """
    The blocks of the discrete fixed-point system.

    Attributes:
        T1 (np.ndarray): d|X| x d|X|.
        T2 (np.ndarray): d|X| x d|X+|.
        U1 (np.ndarray): d|X+| x d|X|.
        U2 (np.ndarray): d|X+| x d|X+|.
        config (DiscConfig): Settings the blocks were built with.
        x_basis (PiecewiseBasis): X grid.
        z_basis (PiecewiseBasis | LegendreBasis): X+ basis.
    """

    T1: np.ndarray
    T2: np.ndarray
    U1: np.ndarray
    U2: np.ndarray
    config: DiscConfig
    x_basis: PiecewiseBasis
    z_basis: Union[PiecewiseBasis, LegendreBasis]

    def __post_init__(self):
        n_x, n_z = self.T1.shape[0], self.U2.shape[0]
        shapes = {
            "T1": (self.T1.shape, (n_x, n_x)),
            "T2": (self.T2.shape, (n_x, n_z)),
            "U1": (self.U1.shape, (n_z, n_x)),
            "U2": (self.U2.shape, (n_z, n_z)),
        }
        for name, (got, want) in shapes.items():
            if got != want:
                raise ValueError(f"block {name} has shape {got}, expected {want}")


def _shift_rows(ctx: DiscContext):
    # rows of V at h + theta for every X node, one piece at a time
    d = ctx.dim
    eye = np.eye(d)
    T1 = np.zeros((ctx.x_size, ctx.x_size))
    T2 = np.zeros((ctx.x_size, ctx.z_size))
    basis = ctx.x_basis
    for k, piece in enumerate(basis.pieces):
        phi, z = scalar_rows(ctx, ctx.h + piece.nodes, ctx.h + 0.5 * (piece.a + piece.b))
        rows = slice(basis.offsets[k] * d, (basis.offsets[k] + piece.size) * d)
        T1[rows] = blocked(eye, phi).reshape(-1, ctx.x_size)
        T2[rows] = blocked(eye, z).reshape(-1, ctx.z_size)

    if ctx.problem.kind is ProblemKind.RFDE:
        # duplicated interface values of a continuous history must agree
        for k in range(len(basis.pieces) - 1):
            last = (basis.offsets[k] + basis.pieces[k].size - 1) * d
            first = basis.offsets[k + 1] * d
            T1[last:last + d] = T1[first:first + d]
            T2[last:last + d] = T2[first:first + d]
    return T1, T2


def assemble_blocks(ctx: DiscContext) -> Blocks:
    """
    Collocation blocks: T rows at h + theta_i, U rows = F_s V at the X+ nodes.

    Raises:
        ValueError: If the context is set up for weighted residuals.
    """
    if ctx.config.method not in (Method.COLLOCATION, Method.PIECEWISE):
        raise ValueError(f"assemble_blocks does not handle {ctx.config.method.value}")
    T1, T2 = _shift_rows(ctx)
    d = ctx.dim
    U1 = np.zeros((ctx.z_size, ctx.x_size))
    U2 = np.zeros((ctx.z_size, ctx.z_size))
    for n, t in enumerate(ctx.z_basis.nodes):
        row = fs_row(ctx, float(t))
        U1[n * d:(n + 1) * d] = row.row_phi
        U2[n * d:(n + 1) * d] = row.row_z
    logger.debug("assembled collocation blocks: X %d, X+ %d", ctx.x_size, ctx.z_size)
    return Blocks(T1, T2, U1, U2, ctx.config, ctx.x_basis, ctx.z_basis)


def residual_cuts(ctx: DiscContext):
    """
    Sub-intervals of [0, h] on which t -> F_s V(t) is smooth.

    Cuts sit where t + theta meets an X breakpoint, for every breakpoint theta
    of the problem (discrete delays and kernel support ends).
    """
    h = ctx.h
    tol = RANGE_TOL * max(1.0, h)
    cuts = {0.0, h}
    for theta in ctx.problem.breakpoints():
        cuts.update(float(b) - theta for b in ctx.x_basis.breakpoints)
    points = [0.0]
    for c in sorted(c for c in cuts if tol < c < h - tol):
        if c - points[-1] > tol:
            points.append(c)
    points.append(h)
    return list(zip(points, points[1:]))


def assemble_weighted_residuals(ctx: DiscContext) -> Blocks:
    """
    Weighted-residual blocks: U rows are <F_s V, p_i> for orthonormal Legendre p_i.

    The inner products use composite Gauss-Legendre with 2N + 2 points per
    sub-interval from residual_cuts. T rows are as for collocation with the
    unknown expressed in the Legendre basis.

    Raises:
        ValueError: If the context is not set up for weighted residuals.
    """
    if ctx.config.method is not Method.WEIGHTED_RESIDUALS:
        raise ValueError("context is not set up for weighted residuals")
    T1, T2 = _shift_rows(ctx)
    d = ctx.dim
    basis = ctx.z_basis
    U1 = np.zeros((basis.size, d, ctx.x_size))
    U2 = np.zeros((basis.size, d, ctx.z_size))
    for a, b in residual_cuts(ctx):
        rule = gauss_legendre(2 * basis.degree + 2, a, b)
        tests = basis.values(rule.points) * rule.weights[:, None]
        for q, t in enumerate(rule.points):
            row = fs_row(ctx, float(t))
            U1 += np.multiply.outer(tests[q], row.row_phi)
            U2 += np.multiply.outer(tests[q], row.row_z)
    logger.debug("assembled weighted-residual blocks: X %d, X+ %d", ctx.x_size, ctx.z_size)
    return Blocks(T1, T2, U1.reshape(ctx.z_size, -1), U2.reshape(ctx.z_size, -1), ctx.config, ctx.x_basis, basis)
