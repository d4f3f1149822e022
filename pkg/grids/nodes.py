"""Interpolation node sets and barycentric Lagrange machinery.

A NodeSet holds ordered nodes on an interval together with their barycentric
weights. Everything that interpolates in this package goes through the
second (true) barycentric form; cardinal functions are integrated exactly by
passing through Chebyshev coefficients.

References
----------
- Berrut & Trefethen (2004), "Barycentric Lagrange Interpolation",
  SIAM Review 46(3):501-517
"""

import enum
from dataclasses import dataclass
from functools import cached_property
from typing import Tuple

import numpy as np
from numpy.polynomial import chebyshev as cheb
from scipy.fft import dct

DEFAULT_PROBE_DENSITY = 30
# relative distance under which a point is treated as coinciding with a node
NODE_HIT_TOL = 1e-14


class NodeFamily(enum.Enum):
    CHEBYSHEV_ZEROS = "chebyshev-zeros"
    CHEBYSHEV_EXTREMA = "chebyshev-extrema"
    CUSTOM = "custom"


@dataclass(frozen=True, eq=False)
class NodeSet:
    """
    Ordered interpolation nodes on [a, b] with barycentric weights.

    Attributes:
        interval (tuple[float, float]): Endpoints (a, b), a < b.
        nodes (np.ndarray): Strictly increasing nodes inside [a, b].
        bary_weights (np.ndarray): w_j = 1 / prod_{k != j}(x_j - x_k), up to a common scale.
        family (NodeFamily): How the nodes were generated.
    """

    interval: Tuple[float, float]
    nodes: np.ndarray
    bary_weights: np.ndarray
    family: NodeFamily

    def __post_init__(self):
        self.nodes.setflags(write=False)
        self.bary_weights.setflags(write=False)

    @property
    def a(self) -> float:
        return self.interval[0]

    @property
    def b(self) -> float:
        return self.interval[1]

    @property
    def size(self) -> int:
        return len(self.nodes)

    @property
    def length(self) -> float:
        return self.interval[1] - self.interval[0]

    @cached_property
    def _integral_coefficients(self) -> np.ndarray:
        """Chebyshev coefficients (in u in [-1, 1]) of the antiderivatives of all cardinal functions."""
        n = self.size
        # cardinal functions sampled at n Chebyshev points of the first kind, ordered for DCT-II
        k = np.arange(n)
        u = np.cos(np.pi * (k + 0.5) / n)
        samples = cardinal_values(self, _to_interval(u, self.a, self.b))
        coeffs = dct(samples, type=2, axis=0) / n
        coeffs[0] /= 2.0
        return cheb.chebint(coeffs, m=1, lbnd=-1.0, scl=self.length / 2.0, axis=0)


def _to_interval(u, a, b):
    return a + (b - a) * (np.asarray(u, dtype=float) + 1.0) / 2.0


def _to_reference(x, a, b):
    return (2.0 * np.asarray(x, dtype=float) - a - b) / (b - a)


def _check_interval(a, b):
    if not (np.isfinite(a) and np.isfinite(b)) or a >= b:
        raise ValueError(f"invalid interval [{a}, {b}]: need a < b")


def chebyshev_zeros(count_index: int, a: float, b: float) -> NodeSet:
    """
    The count_index + 1 zeros of the Chebyshev polynomial of degree count_index + 1, mapped to [a, b].

    Parameters:
        count_index (int): N >= 0; N + 1 nodes are returned.
        a, b (float): Interval endpoints, a < b.

    Returns:
        NodeSet: Ascending nodes ((b - a)/2)(1 - cos((2n+1)pi / (2(N+1)))) + a.

    Raises:
        ValueError: If a >= b or N < 0.
    """
    _check_interval(a, b)
    if count_index < 0:
        raise ValueError("count_index must be nonnegative")
    n = np.arange(count_index + 1)
    angles = (2 * n + 1) * np.pi / (2 * (count_index + 1))
    nodes = (b - a) / 2.0 * (1.0 - np.cos(angles)) + a
    weights = (-1.0) ** n * np.sin(angles)
    return NodeSet((float(a), float(b)), nodes, weights, NodeFamily.CHEBYSHEV_ZEROS)


def chebyshev_extrema(count_index: int, a: float, b: float) -> NodeSet:
    """
    The count_index + 1 Chebyshev extrema on [a, b], endpoints included.

    Parameters:
        count_index (int): M >= 1.
        a, b (float): Interval endpoints, a < b.

    Returns:
        NodeSet: Ascending nodes ((b - a)/2)(1 - cos(m pi / M)) + a, first node a and last node b exactly.

    Raises:
        ValueError: If a >= b or M < 1.
    """
    _check_interval(a, b)
    if count_index < 1:
        raise ValueError("count_index must be at least 1")
    m = np.arange(count_index + 1)
    nodes = (b - a) / 2.0 * (1.0 - np.cos(m * np.pi / count_index)) + a
    nodes[0] = a
    nodes[-1] = b
    weights = (-1.0) ** m
    weights[0] *= 0.5
    weights[-1] *= 0.5
    return NodeSet((float(a), float(b)), nodes, weights, NodeFamily.CHEBYSHEV_EXTREMA)


def custom_nodes(points, a: float, b: float) -> NodeSet:
    """
    NodeSet for arbitrary strictly increasing points in [a, b].

    Weights use the product formula on nodes rescaled to length 4, which keeps
    the products away from overflow for moderate sizes.

    Raises:
        ValueError: If the points are not strictly increasing or leave [a, b].
    """
    _check_interval(a, b)
    nodes = np.array(points, dtype=float)
    if nodes.ndim != 1 or nodes.size == 0:
        raise ValueError("custom nodes must be a nonempty 1-D sequence")
    if np.any(np.diff(nodes) <= 0):
        raise ValueError("custom nodes must be strictly increasing")
    if nodes[0] < a or nodes[-1] > b:
        raise ValueError("custom nodes must lie inside the interval")
    scaled = 4.0 * nodes / (b - a)
    diffs = scaled[:, None] - scaled[None, :]
    np.fill_diagonal(diffs, 1.0)
    weights = 1.0 / np.prod(diffs, axis=1)
    return NodeSet((float(a), float(b)), nodes, weights, NodeFamily.CUSTOM)


def cardinal_values(ns: NodeSet, x) -> np.ndarray:
    """
    Values of all Lagrange cardinal functions at the points x.

    Parameters:
        ns (NodeSet): Node set.
        x (float | array-like): Evaluation points in [a, b].

    Returns:
        np.ndarray: Shape (len(x), n) for array input, (n,) for a scalar. A point
        within NODE_HIT_TOL * (b - a) of a node gets the unit row of that node.
    """
    scalar = np.ndim(x) == 0
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    diff = xs[:, None] - ns.nodes[None, :]
    hit = np.abs(diff) <= NODE_HIT_TOL * ns.length
    diff[hit] = 1.0
    terms = ns.bary_weights[None, :] / diff
    values = terms / terms.sum(axis=1, keepdims=True)

    rows = np.flatnonzero(hit.any(axis=1))
    if rows.size:
        cols = np.argmax(hit[rows], axis=1)
        values[rows] = 0.0
        values[rows, cols] = 1.0
    return values[0] if scalar else values


def lagrange_eval(ns: NodeSet, values, x) -> np.ndarray:
    """
    Barycentric interpolation of nodal values.

    Parameters:
        ns (NodeSet): Node set.
        values (array-like): Shape (n,) or (n, k), one value (vector) per node.
        x (float | array-like): Points in [a, b].

    Returns:
        np.ndarray: Interpolant evaluated at x; exact at nodes.

    Raises:
        ValueError: If values do not match the number of nodes.
    """
    values = np.asarray(values)
    if values.shape[0] != ns.size:
        raise ValueError(f"expected {ns.size} nodal values, got {values.shape[0]}")
    return cardinal_values(ns, x) @ values


def cardinal_antiderivatives(ns: NodeSet, x) -> np.ndarray:
    """
    Exact integrals from a to x of every cardinal function.

    The cardinal polynomials are sampled on a Chebyshev grid, converted to
    Chebyshev coefficients with a DCT and integrated term by term, so the
    result carries no quadrature error.

    Returns:
        np.ndarray: Shape (len(x), n) for array input, (n,) for a scalar.
    """
    scalar = np.ndim(x) == 0
    u = _to_reference(np.atleast_1d(x), ns.a, ns.b)
    values = cheb.chebval(u, ns._integral_coefficients, tensor=True)
    # chebval returns (n, len(x)) for a 2-D coefficient array
    values = np.asarray(values).T
    return values[0] if scalar else values


def lebesgue_constant(ns: NodeSet, probe_density: int = DEFAULT_PROBE_DENSITY) -> float:
    """
    Lower-bound estimate of the Lebesgue constant on a uniform probe grid.

    Parameters:
        ns (NodeSet): Node set.
        probe_density (int): At least 10; the probe grid has probe_density*n + 1 points.

    Returns:
        float: max over the probe grid of sum_j |l_j(x)|.

    Raises:
        ValueError: If probe_density < 10.
    """
    if probe_density < 10:
        raise ValueError("probe_density must be at least 10")
    probe = np.linspace(ns.a, ns.b, probe_density * ns.size + 1)
    return float(np.max(np.sum(np.abs(cardinal_values(ns, probe)), axis=1)))
