"""Finite bases for the X grid on [-tau, 0] and the X+ reduction on [0, h].

A PiecewiseBasis is a list of Lagrange node sets on consecutive pieces. With
``shared=True`` neighbouring pieces share their interface node, which gives
continuous piecewise polynomials; otherwise every piece keeps its own closed
node set and interface values are separate degrees of freedom.

A LegendreBasis spans polynomials of degree N on [0, h] through orthonormal
Legendre polynomials; restriction is the L2 projection.

Both expose the same small interface: ``size``, ``breakpoints``, ``values``,
``antiderivatives``, ``restrict`` and ``prolong``. The ``anchor`` argument of
``values`` names a point inside the piece to use, so one-sided limits at
breakpoints can be requested.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Tuple

import numpy as np

from grids.legendre import legendre_antiderivatives, legendre_orthonormal
from grids.nodes import NodeSet, cardinal_antiderivatives, cardinal_values
from grids.quadrature import gauss_legendre


def _as_output(values, x):
    return values[0] if np.ndim(x) == 0 else values


@dataclass(frozen=True, eq=False)
class PiecewiseBasis:
    """
    Lagrange bases on consecutive pieces.

    Attributes:
        pieces (tuple[NodeSet, ...]): Node sets on consecutive intervals, ascending.
        shared (bool): Whether each interface node is a single degree of freedom.
    """

    pieces: Tuple[NodeSet, ...]
    shared: bool = False

    def __post_init__(self):
        if not self.pieces:
            raise ValueError("a piecewise basis needs at least one piece")
        for left, right in zip(self.pieces, self.pieces[1:]):
            if abs(left.b - right.a) > 1e-12 * max(1.0, abs(left.b)):
                raise ValueError("pieces must be contiguous")
            if self.shared and (left.nodes[-1] != left.b or right.nodes[0] != right.a):
                raise ValueError("shared interfaces need node sets that include their endpoints")

    @property
    def interval(self) -> Tuple[float, float]:
        return self.pieces[0].a, self.pieces[-1].b

    @cached_property
    def breakpoints(self) -> np.ndarray:
        return np.array([piece.a for piece in self.pieces] + [self.pieces[-1].b])

    @cached_property
    def offsets(self) -> Tuple[int, ...]:
        """Global index of the first node of every piece."""
        step = [piece.size - (1 if self.shared else 0) for piece in self.pieces]
        return tuple(int(v) for v in np.concatenate([[0], np.cumsum(step)[:-1]]))

    @property
    def size(self) -> int:
        return self.offsets[-1] + self.pieces[-1].size

    @cached_property
    def nodes(self) -> np.ndarray:
        out = np.empty(self.size)
        for offset, piece in zip(self.offsets, self.pieces):
            out[offset:offset + piece.size] = piece.nodes
        return out

    def piece_columns(self, k: int) -> slice:
        return slice(self.offsets[k], self.offsets[k] + self.pieces[k].size)

    def locate(self, x: float) -> int:
        """Index of the rightmost piece whose closed interval holds x."""
        k = int(np.searchsorted(self.breakpoints[:-1], x, side="right")) - 1
        return min(max(k, 0), len(self.pieces) - 1)

    def values(self, x, anchor=None) -> np.ndarray:
        """
        Values of all basis functions at x.

        Every point is evaluated with the polynomial of one piece: the piece
        holding ``anchor`` when given, otherwise the piece located from the
        point itself.

        Returns:
            np.ndarray: Shape (len(x), size), or (size,) for scalar x.
        """
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.zeros((xs.size, self.size))
        if anchor is not None:
            k = self.locate(anchor)
            out[:, self.piece_columns(k)] = cardinal_values(self.pieces[k], xs)
        else:
            for i, point in enumerate(xs):
                k = self.locate(point)
                out[i, self.piece_columns(k)] = cardinal_values(self.pieces[k], point)
        return _as_output(out, x)

    def antiderivatives(self, x) -> np.ndarray:
        """Integrals from the left end of the basis interval to x of every basis function."""
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.zeros((xs.size, self.size))
        for k, piece in enumerate(self.pieces):
            clipped = np.clip(xs, piece.a, piece.b)
            out[:, self.piece_columns(k)] += cardinal_antiderivatives(piece, clipped)
        return _as_output(out, x)

    def restrict(self, f) -> np.ndarray:
        """
        Nodal values of f, sampled piece by piece.

        f is called as ``f(points, anchor)`` with the nodes of one piece and a
        point inside that piece, and returns one value (or row) per point.
        """
        samples = [np.asarray(f(piece.nodes, 0.5 * (piece.a + piece.b)), dtype=float) for piece in self.pieces]
        out = np.empty((self.size,) + samples[0].shape[1:])
        for offset, piece, sample in zip(self.offsets, self.pieces, samples):
            out[offset:offset + piece.size] = sample
        return out

    def prolong(self, coeffs, x, anchor=None) -> np.ndarray:
        return self.values(x, anchor) @ np.asarray(coeffs)


@dataclass(frozen=True, eq=False)
class LegendreBasis:
    """
    Orthonormal Legendre polynomials p_0..p_N on [a, b].

    Attributes:
        degree (int): N.
        interval (tuple[float, float]): (a, b).
    """

    degree: int
    interval: Tuple[float, float]

    @property
    def size(self) -> int:
        return self.degree + 1

    @cached_property
    def breakpoints(self) -> np.ndarray:
        return np.array(self.interval, dtype=float)

    def values(self, x, anchor=None) -> np.ndarray:
        a, b = self.interval
        return legendre_orthonormal(self.degree, a, b, x)

    def antiderivatives(self, x) -> np.ndarray:
        a, b = self.interval
        return legendre_antiderivatives(self.degree, a, b, x)

    def projection_rule(self):
        """Gauss-Legendre rule with 2N + 2 points, exact for products of two basis functions."""
        return gauss_legendre(2 * self.degree + 2, *self.interval)

    def restrict(self, f) -> np.ndarray:
        """Coefficients <f, p_i>; f is called as ``f(points, anchor)`` like PiecewiseBasis.restrict."""
        rule = self.projection_rule()
        a, b = self.interval
        samples = np.asarray(f(rule.points, 0.5 * (a + b)), dtype=float)
        return self.values(rule.points).T @ (rule.weights.reshape((-1,) + (1,) * (samples.ndim - 1)) * samples)

    def prolong(self, coeffs, x, anchor=None) -> np.ndarray:
        return self.values(x) @ np.asarray(coeffs)
