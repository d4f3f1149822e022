"""Linear functionals of the discrete state (Phi, Z) as explicit rows.

A state is the pair Phi (d values per X node) and Z (d coefficients per X+
basis function). Both are stored node-major: entry m*d + j is component j of
node m. A RowPair holds d rows, one per component of a vector-valued
functional, so ``row_phi @ Phi + row_z @ Z`` is a point of R^d.

V glues history and unknown: for an RFDE, V(phi, z)(x) = phi(0) + int_0^x z
for x > 0 and phi(x) for x <= 0; for an RE, V(phi, z)(x) = z(x) for x >= 0
and phi(x) for x < 0.
"""

from dataclasses import dataclass

import numpy as np

from grids.quadrature import clenshaw_curtis
from problems.evaluate import eval_coeff, eval_kernel
from problems.spec import ProblemKind

# relative tolerance for points sitting on the ends of [-tau, h] and for merging cut points
RANGE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class RowPair:
    """
    Coefficients of a d-vector functional in the state (Phi, Z).

    Attributes:
        row_phi (np.ndarray): Shape (d, d * X size).
        row_z (np.ndarray): Shape (d, d * X+ size).
    """

    row_phi: np.ndarray
    row_z: np.ndarray

    def __add__(self, other: "RowPair") -> "RowPair":
        return RowPair(self.row_phi + other.row_phi, self.row_z + other.row_z)

    def apply(self, phi, z) -> np.ndarray:
        return self.row_phi @ np.asarray(phi) + self.row_z @ np.asarray(z)


def blocked(coeffs, scalar_rows) -> np.ndarray:
    """
    Kronecker-expand scalar rows into d-blocked rows.

    Parameters:
        coeffs (np.ndarray): (d, d) matrix, or (K, d, d) for one matrix per row.
        scalar_rows (np.ndarray): (K, n) scalar rows.

    Returns:
        np.ndarray: (K, d, n * d), with entry [q, i, m*d + j] = coeffs[i, j] * scalar_rows[q, m].
    """
    coeffs = np.asarray(coeffs, dtype=float)
    scalar_rows = np.atleast_2d(scalar_rows)
    count, n = scalar_rows.shape
    if coeffs.ndim == 2:
        out = np.einsum("ij,qm->qimj", coeffs, scalar_rows)
    else:
        out = np.einsum("qij,qm->qimj", coeffs, scalar_rows)
    d = out.shape[1]
    return out.reshape(count, d, n * d)


def scalar_rows(ctx, xs, anchor):
    """
    Scalar rows of V at the points xs, all read from the same side and piece.

    The anchor is a point strictly inside the sub-interval holding xs; it
    decides between history and unknown and which piece's polynomial is used,
    so xs may include the sub-interval's end points.

    Returns:
        tuple[np.ndarray, np.ndarray]: (len(xs), X size) and (len(xs), X+ size).
    """
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    phi = np.zeros((xs.size, ctx.x_basis.size))
    z = np.zeros((xs.size, ctx.z_basis.size))
    if ctx.problem.kind is ProblemKind.RE:
        if anchor >= 0:
            z[:] = ctx.z_basis.values(xs, anchor=anchor)
        else:
            phi[:] = ctx.x_basis.values(xs, anchor=anchor)
    elif anchor > 0:
        phi[:] = ctx.x_basis.values(0.0, anchor=0.0)
        z[:] = ctx.z_basis.antiderivatives(xs)
    else:
        phi[:] = ctx.x_basis.values(xs, anchor=anchor)
    return phi, z


def _check_range(ctx, x, lo, hi, what):
    tol = RANGE_TOL * max(1.0, ctx.problem.max_delay, ctx.h)
    if not (lo - tol <= x <= hi + tol):
        raise ValueError(f"{what} {x} outside [{lo}, {hi}]")


def v_row(ctx, x: float, anchor=None) -> RowPair:
    """
    Row of V(P Phi, P+ Z)(x).

    At x = 0 an RFDE reads phi(0) and an RE reads z(0); pass an anchor to pick
    the piece (and side) explicitly at a breakpoint.

    Raises:
        ValueError: If x lies outside [-tau, h].
    """
    _check_range(ctx, x, -ctx.problem.max_delay, ctx.h, "point")
    phi, z = scalar_rows(ctx, [x], x if anchor is None else anchor)
    eye = np.eye(ctx.dim)
    return RowPair(blocked(eye, phi)[0], blocked(eye, z)[0])


def _unique_sorted(points, tol):
    out = []
    for value in sorted(points):
        if not out or value - out[-1] > tol:
            out.append(value)
    return out


def kernel_cuts(ctx, support, t: float):
    """
    Sub-intervals of a kernel support on which the integrand of F_s V is smooth.

    The support is split at the kink theta = -t and wherever t + theta crosses
    a breakpoint of either basis.
    """
    lo, hi = support
    tol = RANGE_TOL * max(1.0, ctx.problem.max_delay, ctx.h)
    candidates = {lo, hi, -t}
    candidates.update(float(b) - t for b in ctx.x_basis.breakpoints)
    candidates.update(float(b) - t for b in ctx.z_basis.breakpoints)
    inside = [c for c in candidates if lo <= c <= hi]
    points = _unique_sorted(inside, tol)
    points[0], points[-1] = lo, hi
    return [(a, b) for a, b in zip(points, points[1:]) if b - a > tol]


def fs_row(ctx, t: float) -> RowPair:
    """
    Row of F_s V(P Phi, P+ Z)(t), the right-hand side at time s + t.

    RFDE: A(s+t) V(t) + sum_k B_k(s+t) V(t - tau_k) + sum_k int C_k(s+t, theta) V(t + theta).
    RE: sum_k int C_k(s+t, theta) V(t + theta).
    Kernel integrals use Clenshaw-Curtis on every sub-interval from kernel_cuts.

    Raises:
        ValueError: If t lies outside [0, h].
        CoefficientError: If a coefficient cannot be evaluated at s + t.
    """
    _check_range(ctx, t, 0.0, ctx.h, "time")
    p = ctx.problem
    d = p.dim
    time = ctx.config.s + t
    row_phi = np.zeros((d, ctx.x_size))
    row_z = np.zeros((d, ctx.z_size))

    if p.kind is ProblemKind.RFDE:
        terms = [(eval_coeff(p.A, time), t)] if p.A is not None else []
        terms += [(eval_coeff(term.B, time), t - term.delay) for term in p.discrete]
        for coeff, x in terms:
            phi, z = scalar_rows(ctx, [x], x)
            row_phi += blocked(coeff, phi)[0]
            row_z += blocked(coeff, z)[0]

    for term in p.kernels:
        for a, b in kernel_cuts(ctx, term.support, t):
            rule = clenshaw_curtis(ctx.config.quad_points, a, b)
            weighted = eval_kernel(term.C, time, rule.points) * rule.weights[:, None, None]
            phi, z = scalar_rows(ctx, t + rule.points, t + 0.5 * (a + b))
            row_phi += blocked(weighted, phi).sum(axis=0)
            row_z += blocked(weighted, z).sum(axis=0)
    return RowPair(row_phi, row_z)
