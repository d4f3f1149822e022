"""Quadrature rules on an interval: Clenshaw-Curtis and Gauss-Legendre.

Reference rules on [-1, 1] are memoized per point count; mapped rules are
cheap affine images of them.
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from common.cache import LRUCache

_REFERENCE_RULES = LRUCache(64)


@dataclass(frozen=True, eq=False)
class QuadRule:
    """
    Quadrature points and weights on an interval.

    Attributes:
        points (np.ndarray): Ascending points in [a, b].
        weights (np.ndarray): Weights summing to b - a.
        interval (tuple[float, float]): (a, b).
    """

    points: np.ndarray
    weights: np.ndarray
    interval: Tuple[float, float]

    def integrate(self, values) -> np.ndarray:
        """Apply the rule to sampled values (leading axis = points)."""
        return np.tensordot(self.weights, np.asarray(values), axes=(0, 0))

    def mapped(self, a: float, b: float) -> "QuadRule":
        """The same rule transplanted to [a, b]."""
        lo, hi = self.interval
        scale = (b - a) / (hi - lo)
        return QuadRule(a + (self.points - lo) * scale, self.weights * scale, (a, b))


def _clenshaw_curtis_reference(count: int) -> QuadRule:
    # Trefethen, Spectral Methods in MATLAB, clencurt.m; ascending order
    n = count - 1
    theta = np.pi * np.arange(n + 1) / n
    x = -np.cos(theta)
    w = np.zeros(n + 1)
    v = np.ones(n - 1)
    inner = theta[1:-1]
    if n % 2 == 0:
        w[0] = w[n] = 1.0 / (n * n - 1)
        for k in range(1, n // 2):
            v -= 2.0 * np.cos(2 * k * inner) / (4 * k * k - 1)
        v -= np.cos(n * inner) / (n * n - 1)
    else:
        w[0] = w[n] = 1.0 / (n * n)
        for k in range(1, (n - 1) // 2 + 1):
            v -= 2.0 * np.cos(2 * k * inner) / (4 * k * k - 1)
    w[1:-1] = 2.0 * v / n
    x[0], x[-1] = -1.0, 1.0
    return QuadRule(x, w, (-1.0, 1.0))


def clenshaw_curtis(count: int, a: float, b: float) -> QuadRule:
    """
    Clenshaw-Curtis rule with count points on [a, b], endpoints included.

    Parameters:
        count (int): K >= 2.
        a, b (float): Interval endpoints, a < b.

    Returns:
        QuadRule: Exact for polynomials of degree <= K - 1, positive weights.

    Raises:
        ValueError: If K < 2 or a >= b.
    """
    if count < 2:
        raise ValueError("Clenshaw-Curtis needs at least 2 points")
    if a >= b:
        raise ValueError(f"invalid interval [{a}, {b}]: need a < b")
    reference = _REFERENCE_RULES.get_or_create(("cc", count), lambda: _clenshaw_curtis_reference(count))
    return reference.mapped(a, b)


def gauss_legendre(count: int, a: float, b: float) -> QuadRule:
    """
    Gauss-Legendre rule with count points on [a, b] (exact to degree 2*count - 1).

    Raises:
        ValueError: If count < 1 or a >= b.
    """
    if count < 1:
        raise ValueError("Gauss-Legendre needs at least 1 point")
    if a >= b:
        raise ValueError(f"invalid interval [{a}, {b}]: need a < b")

    def build():
        x, w = np.polynomial.legendre.leggauss(count)
        return QuadRule(x, w, (-1.0, 1.0))

    return _REFERENCE_RULES.get_or_create(("gl", count), build).mapped(a, b)
