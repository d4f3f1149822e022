"""Approximation substrate: node sets, barycentric interpolation, Legendre polynomials, quadrature."""

from grids.legendre import legendre_antiderivatives, legendre_orthonormal
from grids.nodes import (
    NodeFamily,
    NodeSet,
    cardinal_antiderivatives,
    cardinal_values,
    chebyshev_extrema,
    chebyshev_zeros,
    custom_nodes,
    lagrange_eval,
    lebesgue_constant,
)
from grids.quadrature import QuadRule, clenshaw_curtis, gauss_legendre
