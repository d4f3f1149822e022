"""Characteristic roots of autonomous problems by Newton iteration on det Delta(lambda)."""

import logging
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np
from scipy.linalg import det

from problems.evaluate import characteristic_matrix, is_autonomous
from problems.spec import ProblemSpec

logger = logging.getLogger(__name__)

MAX_NEWTON_STEPS = 50
DET_TOL = 1e-12
STEP_TOL = 1e-14
DEDUP_TOL = 1e-8
REGION_TOL = 1e-9
# real parts equal to this many decimals are ordered by imaginary part
SORT_DECIMALS = 10
# iterates this far out are abandoned
ESCAPE_RADIUS = 1e6


@dataclass(frozen=True)
class RootSearchRegion:
    """
    Rectangle of the complex plane seeded with a uniform grid of Newton starts.

    Attributes:
        re_range (tuple[float, float]): (re_min, re_max).
        im_range (tuple[float, float]): (im_min, im_max).
        grid (tuple[int, int]): Number of starts along the real and imaginary axes.
    """

    re_range: Tuple[float, float]
    im_range: Tuple[float, float]
    grid: Tuple[int, int] = (8, 8)

    def __post_init__(self):
        for name, (lo, hi) in (("re_range", self.re_range), ("im_range", self.im_range)):
            if not hi > lo:
                raise ValueError(f"{name} must satisfy min < max, got ({lo}, {hi})")
        if min(self.grid) < 2:
            raise ValueError(f"grid counts must be at least 2, got {self.grid}")

    def starts(self) -> np.ndarray:
        re = np.linspace(self.re_range[0], self.re_range[1], self.grid[0])
        im = np.linspace(self.im_range[0], self.im_range[1], self.grid[1])
        return (re[:, None] + 1j * im[None, :]).ravel()

    def contains(self, z: complex, tol: float = REGION_TOL) -> bool:
        return (self.re_range[0] - tol <= z.real <= self.re_range[1] + tol
                and self.im_range[0] - tol <= z.imag <= self.im_range[1] + tol)


def _det(p, lam):
    matrix = characteristic_matrix(p, lam)
    if not np.all(np.isfinite(matrix)):
        return complex(np.nan, np.nan)
    return complex(det(matrix))


def _newton(p, z):
    """Root reached from z, or None when the iteration fails."""
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(MAX_NEWTON_STEPS):
            f = _det(p, z)
            step = 1e-7 * (1.0 + abs(z))
            df = (_det(p, z + step) - _det(p, z - step)) / (2.0 * step)
            if df == 0 or not np.isfinite(df) or not np.isfinite(f):
                return None
            dz = f / df
            z = z - dz
            if not np.isfinite(z) or abs(z) > ESCAPE_RADIUS:
                return None
            if abs(dz) <= STEP_TOL * (1.0 + abs(z)):
                break
        residual = abs(_det(p, z))
    if not residual <= DET_TOL * (1.0 + abs(z)) ** p.dim:
        return None
    return z


def _dedup(roots):
    out = []
    for z in sorted(roots, key=lambda v: (v.real, v.imag)):
        if not any(abs(z - kept) <= DEDUP_TOL for kept in out):
            out.append(z)
    return out


def char_roots(p: ProblemSpec, region: RootSearchRegion) -> List[complex]:
    """
    Roots of det Delta(lambda) inside region.

    Newton runs from every grid start with a central-difference derivative
    (step 1e-7 * (1 + |lambda|)) and is accepted once
    |det Delta| <= 1e-12 * (1 + |lambda|)^d. Roots closer than 1e-8 are
    merged after sorting, so the result does not depend on the order of the
    starts.

    Parameters:
        p (ProblemSpec): A validated autonomous problem.
        region (RootSearchRegion): Where to look.

    Returns:
        list[complex]: Roots by descending real part, then descending
            imaginary part. Empty when nothing converges inside the region.

    Raises:
        ValueError: If p is not autonomous.
    """
    if not is_autonomous(p):
        raise ValueError("characteristic roots need an autonomous problem")
    found = []
    for start in region.starts():
        z = _newton(p, complex(start))
        if z is not None and region.contains(z):
            found.append(z)
    roots = _dedup(found)
    roots.sort(key=lambda v: (-round(v.real, SORT_DECIMALS), -v.imag))
    logger.info("%d characteristic roots from %d starts", len(roots), region.grid[0] * region.grid[1])
    return roots
