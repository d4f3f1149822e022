"""Brute-force monodromy matrices: every cardinal history is integrated forward in time.

The state grid is the Chebyshev extrema of index M on [-tau, 0]. Column
m*d + j of the result starts from the history e_j * l_m(theta), l_m being the
m-th cardinal function, and holds x(h + theta_k) in its rows k*d + i. All
columns are advanced together as one (d, d * (M + 1)) array.

RFDEs use classical RK4 with step h / steps. Delayed values come from the
history for negative arguments and from cubic Hermite interpolation of the
computed grid values otherwise; arguments inside the current step are
extrapolated to first order from the last grid point.

REs are stepped in their Volterra form on the same uniform grid: the part of
each kernel integral that reaches into the history is integrated by
Clenshaw-Curtis up to the kink, and the part over the computed solution is a
trapezoidal memory sum whose weight on the current value is solved for
implicitly.
"""

import logging

import numpy as np
from scipy.linalg import LinAlgError, solve

from common.errors import IntegrationError
from discretize.rows import blocked
from grids.nodes import NodeSet, cardinal_values, chebyshev_extrema
from grids.quadrature import clenshaw_curtis
from problems.evaluate import eval_coeff, eval_kernel
from problems.spec import ProblemKind, ProblemSpec

logger = logging.getLogger(__name__)

MIN_STEPS = 64
KERNEL_POINTS = 32
# relative tolerance for interval ends that fall on grid points
GRID_TOL = 1e-9


class _Trajectory:
    """Computed grid values of all columns, with history and Hermite lookups."""

    def __init__(self, nodes: NodeSet, dim: int, steps: int, dt: float):
        self.nodes = nodes
        self.dim = dim
        self.dt = dt
        width = dim * nodes.size
        self.X = np.zeros((steps + 1, dim, width))
        self.F = np.zeros((steps + 1, dim, width))
        self.done = 0
        self.slope_ready = False

    def history(self, xs) -> np.ndarray:
        return blocked(np.eye(self.dim), cardinal_values(self.nodes, np.atleast_1d(xs)))

    def values(self, xs) -> np.ndarray:
        """Solution at the points xs, shape (len(xs), d, d * (M + 1))."""
        xs = np.atleast_1d(np.asarray(xs, dtype=float))
        out = np.empty((xs.size,) + self.X.shape[1:])
        past = xs < 0
        if past.any():
            out[past] = self.history(xs[past])
        if not past.all():
            out[~past] = self._solution(xs[~past])
        return out

    def _solution(self, xs):
        last = self.done
        u = xs / self.dt
        out = np.empty((xs.size,) + self.X.shape[1:])
        ahead = u >= last
        if ahead.any():
            tail = (xs[ahead] - last * self.dt)[:, None, None]
            out[ahead] = self.X[last] + tail * self.F[last]
        inside = ~ahead
        if not inside.any():
            return out
        n = np.minimum(np.floor(u[inside]).astype(int), last - 1)
        s = (u[inside] - n)[:, None, None]
        x0, x1 = self.X[n], self.X[n + 1]
        f0, f1 = self.dt * self.F[n], self.dt * self.F[n + 1]
        cubic = ((1 + 2 * s) * (1 - s) ** 2 * x0 + s * (1 - s) ** 2 * f0
                 + s * s * (3 - 2 * s) * x1 + s * s * (s - 1) * f1)
        # the slope at the newest point is unknown while its own derivative is evaluated
        quadratic = x0 + s * f0 + s * s * (x1 - x0 - f0)
        exact = (n + 1 < last) | self.slope_ready
        out[inside] = np.where(exact[:, None, None], cubic, quadratic)
        return out


def _kernel_points(nodes):
    return max(KERNEL_POINTS, 2 * nodes.size)


def _kernel_integral(term, time, t, lookup, count):
    lo, hi = term.support
    cuts = [lo] + ([-t] if lo < -t < hi else []) + [hi]
    total = 0.0
    for a, b in zip(cuts, cuts[1:]):
        rule = clenshaw_curtis(count, a, b)
        weighted = eval_kernel(term.C, time, rule.points) * rule.weights[:, None, None]
        total = total + np.einsum("qij,qjc->ic", weighted, lookup(t + rule.points))
    return total


def _rfde_rhs(p, s, traj, t, x, count):
    time = s + t
    out = eval_coeff(p.A, time) @ x if p.A is not None else np.zeros_like(x)
    for term in p.discrete:
        out = out + eval_coeff(term.B, time) @ traj.values([t - term.delay])[0]
    for term in p.kernels:
        out = out + _kernel_integral(term, time, t, traj.values, count)
    return out


def _check_finite(values, t, steps):
    if not np.all(np.isfinite(values)):
        raise IntegrationError(f"solution overflowed at t={t:.6g}", steps)


def _integrate_rfde(p, h, nodes, steps, s):
    dt = h / steps
    traj = _Trajectory(nodes, p.dim, steps, dt)
    count = _kernel_points(nodes)
    traj.X[0] = traj.history([0.0])[0]

    def rhs(t, x):
        return _rfde_rhs(p, s, traj, t, x, count)

    with np.errstate(over="ignore", invalid="ignore"):
        for n in range(steps):
            t = n * dt
            traj.done, traj.slope_ready = n, False
            x = traj.X[n]
            k1 = rhs(t, x)
            traj.F[n] = k1
            traj.slope_ready = True
            k2 = rhs(t + 0.5 * dt, x + 0.5 * dt * k1)
            k3 = rhs(t + 0.5 * dt, x + 0.5 * dt * k2)
            k4 = rhs(t + dt, x + dt * k3)
            traj.X[n + 1] = x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            _check_finite(traj.X[n + 1], t + dt, steps)
        traj.done, traj.slope_ready = steps, False
        traj.F[steps] = rhs(h, traj.X[steps])
        traj.slope_ready = True
    _check_finite(traj.F[steps], h, steps)

    targets = h + nodes.nodes
    return traj.values(targets)


def _trapezoid_weights(a, b, dt, last):
    """
    Weights on grid indices 0..last for the trapezoidal rule of int_a^b.

    The knots are the grid points inside [a, b] plus the ends; an end off the
    grid is read by linear interpolation between its two neighbours.
    """
    first = int(np.ceil(a / dt - GRID_TOL))
    final = int(np.floor(b / dt + GRID_TOL))
    grid = list(dt * np.arange(first, final + 1))
    knots = grid if grid else []
    if not grid or first * dt - a > GRID_TOL * dt:
        knots = [a] + knots
    if not grid or b - final * dt > GRID_TOL * dt:
        knots = knots + [b]
    knots = np.asarray(knots)
    widths = np.diff(knots)
    weights = np.zeros(knots.size)
    weights[:-1] += 0.5 * widths
    weights[1:] += 0.5 * widths

    pos = knots / dt
    low = np.clip(np.floor(pos + GRID_TOL).astype(int), 0, last)
    frac = np.clip(pos - low, 0.0, 1.0)
    high = np.minimum(low + 1, last)
    total = (np.bincount(low, weights * (1.0 - frac), minlength=last + 1)
             + np.bincount(high, weights * frac, minlength=last + 1))
    index = np.flatnonzero(total)
    return index, total[index]


def _integrate_re(p, h, nodes, steps, s):
    d = p.dim
    dt = h / steps
    grid = dt * np.arange(steps + 1)
    width = d * nodes.size
    X = np.zeros((steps + 1, d, width))
    eye = np.eye(d)
    count = _kernel_points(nodes)
    tol = GRID_TOL * max(1.0, p.max_delay, h)

    def history(xs):
        return blocked(eye, cardinal_values(nodes, np.atleast_1d(xs)))

    with np.errstate(over="ignore", invalid="ignore"):
        for n in range(steps + 1):
            t = grid[n]
            time = s + t
            rhs = np.zeros((d, width))
            implicit = np.zeros((d, d))
            for term in p.kernels:
                lo, hi = term.support
                b = min(hi, -t)
                if b - lo > tol:
                    rule = clenshaw_curtis(count, lo, b)
                    weighted = eval_kernel(term.C, time, rule.points) * rule.weights[:, None, None]
                    rhs += np.einsum("qij,qjc->ic", weighted, history(t + rule.points))
                ua, ub = max(lo + t, 0.0), hi + t
                if ub - ua > tol:
                    index, weights = _trapezoid_weights(ua, ub, dt, n)
                    kern = eval_kernel(term.C, time, grid[index] - t) * weights[:, None, None]
                    known = index < n
                    rhs += np.einsum("qij,qjc->ic", kern[known], X[index[known]])
                    implicit += kern[~known].sum(axis=0)
            try:
                X[n] = solve(eye - implicit, rhs)
            except LinAlgError as e:
                raise IntegrationError(f"implicit step singular at t={t:.6g}", steps) from e
            _check_finite(X[n], t, steps)

    targets = h + nodes.nodes
    out = np.empty((targets.size, d, width))
    past = targets < 0
    if past.any():
        out[past] = history(targets[past])
    pos = targets[~past] / dt
    low = np.clip(np.floor(pos).astype(int), 0, steps - 1)
    frac = (pos - low)[:, None, None]
    out[~past] = (1.0 - frac) * X[low] + frac * X[low + 1]
    return out


def monodromy_bruteforce(p: ProblemSpec, h: float, M: int, steps: int, s: float = 0.0) -> np.ndarray:
    """
    Matrix of U(s + h, s) restricted to the Chebyshev extrema of index M on [-tau, 0].

    Parameters:
        p (ProblemSpec): A validated problem.
        h (float): Time step of the evolution operator, h > 0.
        M (int): Grid index, M >= 1.
        steps (int): Number of fine time steps on [0, h], at least 64.
        s (float): Initial time.

    Returns:
        np.ndarray: Square matrix of size d * (M + 1), in the node-major state order.

    Raises:
        ValueError: On h <= 0, M < 1 or steps < 64.
        IntegrationError: If the integration overflows.
        CoefficientError: If a coefficient cannot be evaluated.
    """
    if not h > 0:
        raise ValueError("h must be positive")
    if M < 1:
        raise ValueError("M must be at least 1")
    if steps < MIN_STEPS:
        raise ValueError(f"steps must be at least {MIN_STEPS}, got {steps}")
    nodes = chebyshev_extrema(M, -p.max_delay, 0.0)
    logger.info("brute-force monodromy: %s, h=%g, M=%d, steps=%d", p.kind.value, h, M, steps)
    if p.kind is ProblemKind.RE:
        values = _integrate_re(p, h, nodes, steps, s)
    else:
        values = _integrate_rfde(p, h, nodes, steps, s)
    size = p.dim * nodes.size
    return values.reshape(size, size)
