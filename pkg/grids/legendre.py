"""Orthonormal Legendre polynomials on [a, b] and their antiderivatives."""

import numpy as np


def _legendre_table(count_index, u):
    # classical P_0..P_{count_index} at u by the three-term recurrence
    u = np.asarray(u, dtype=float)
    table = np.empty((count_index + 1,) + u.shape)
    table[0] = 1.0
    if count_index >= 1:
        table[1] = u
    for k in range(1, count_index):
        table[k + 1] = ((2 * k + 1) * u * table[k] - k * table[k - 1]) / (k + 1)
    return table


def _reference(x, a, b):
    if a >= b:
        raise ValueError(f"invalid interval [{a}, {b}]: need a < b")
    return (2.0 * np.asarray(x, dtype=float) - a - b) / (b - a)


def legendre_orthonormal(count_index: int, a: float, b: float, x) -> np.ndarray:
    """
    Values p_0(x)..p_N(x) of Legendre polynomials shifted to [a, b] and
    normalized so that the integral over [a, b] of p_i p_j is delta_ij.

    Returns:
        np.ndarray: Shape (N+1,) for scalar x, (len(x), N+1) for array x.
    """
    if count_index < 0:
        raise ValueError("count_index must be nonnegative")
    u = _reference(x, a, b)
    k = np.arange(count_index + 1)
    scale = np.sqrt((2 * k + 1) / (b - a))
    values = _legendre_table(count_index, np.atleast_1d(u)).T * scale
    return values[0] if np.ndim(x) == 0 else values


def legendre_antiderivatives(count_index: int, a: float, b: float, x) -> np.ndarray:
    """
    Integrals from a to x of the orthonormal p_0..p_N.

    Uses the integral of P_0 = u + 1 and, for k >= 1,
    the integral of P_k = (P_{k+1} - P_{k-1}) / (2k + 1), both from -1.

    Returns:
        np.ndarray: Shape (N+1,) for scalar x, (len(x), N+1) for array x.
    """
    if count_index < 0:
        raise ValueError("count_index must be nonnegative")
    u = np.atleast_1d(_reference(x, a, b))
    table = _legendre_table(count_index + 1, u)
    integrals = np.empty((count_index + 1, u.size))
    integrals[0] = u + 1.0
    for k in range(1, count_index + 1):
        integrals[k] = (table[k + 1] - table[k - 1]) / (2 * k + 1)
    k = np.arange(count_index + 1)
    scale = np.sqrt((2 * k + 1) / (b - a)) * (b - a) / 2.0
    values = integrals.T * scale
    return values[0] if np.ndim(x) == 0 else values
