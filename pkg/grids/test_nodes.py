"""Tests for node sets, barycentric interpolation and cardinal antiderivatives."""

import math

import numpy as np
import pytest

from grids.nodes import (
    NodeFamily,
    cardinal_antiderivatives,
    cardinal_values,
    chebyshev_extrema,
    chebyshev_zeros,
    custom_nodes,
    lagrange_eval,
    lebesgue_constant,
)

rng = np.random.default_rng(20240611)


def _all_families():
    return [
        chebyshev_zeros(0, 0.0, 1.0),
        chebyshev_zeros(7, -1.0, 0.0),
        chebyshev_zeros(20, 0.0, 2.0),
        chebyshev_extrema(1, -1.0, 0.0),
        chebyshev_extrema(12, -3.0, 0.0),
        custom_nodes([0.0, 0.2, 0.5, 0.9], 0.0, 1.0),
    ]


# Tests the closed-form Chebyshev zeros for N = 1 on [0, 1].
def test_chebyshev_zeros_two_nodes():
    ns = chebyshev_zeros(1, 0.0, 1.0)
    assert ns.family is NodeFamily.CHEBYSHEV_ZEROS
    assert ns.nodes == pytest.approx([0.146446609406726, 0.853553390593274], abs=1e-12)


# Tests that N = 0 gives the midpoint.
def test_chebyshev_zeros_single_midpoint():
    assert chebyshev_zeros(0, 0.0, 0.7).nodes == pytest.approx([0.35])


# Tests the cosine symmetry of the zeros.
def test_chebyshev_zeros_symmetric():
    nodes = chebyshev_zeros(3, 0.0, 2.0).nodes
    assert nodes + nodes[::-1] == pytest.approx(np.full(4, 2.0))
    assert np.all(np.diff(nodes) > 0)


# Tests the extrema for small M and that endpoints are hit exactly.
def test_chebyshev_extrema_small():
    assert list(chebyshev_extrema(1, -1.0, 0.0).nodes) == [-1.0, 0.0]
    assert chebyshev_extrema(2, -1.0, 0.0).nodes == pytest.approx([-1.0, -0.5, 0.0])
    nodes = chebyshev_extrema(4, -2.0, 0.0).nodes
    assert nodes[0] == -2.0 and nodes[-1] == 0.0
    assert nodes + nodes[::-1] == pytest.approx(np.full(5, -2.0))


# Tests argument validation of the node constructors.
def test_invalid_arguments():
    with pytest.raises(ValueError):
        chebyshev_zeros(3, 1.0, 1.0)
    with pytest.raises(ValueError):
        chebyshev_extrema(0, 0.0, 1.0)
    with pytest.raises(ValueError):
        custom_nodes([0.0, 0.0], 0.0, 1.0)


# Tests that closed-form weights agree with the product formula up to a common scale.
@pytest.mark.parametrize("ns", [chebyshev_zeros(9, 0.0, 1.0), chebyshev_extrema(9, -1.0, 0.0)])
def test_weights_match_product_formula(ns):
    reference = custom_nodes(ns.nodes, ns.a, ns.b).bary_weights
    ratio = ns.bary_weights / reference
    assert ratio == pytest.approx(np.full(ns.size, ratio[0]), rel=1e-10)


# Tests partition of unity at 1000 random points for every family.
@pytest.mark.parametrize("ns", _all_families())
def test_partition_of_unity(ns):
    x = rng.uniform(ns.a, ns.b, 1000)
    assert np.max(np.abs(cardinal_values(ns, x).sum(axis=1) - 1.0)) <= 1e-12


# Tests reproduction of constants and of the identity function.
def test_reproduces_constants_and_linear():
    ns = chebyshev_zeros(6, 0.0, 1.0)
    x = np.linspace(0.0, 1.0, 11)
    assert lagrange_eval(ns, np.ones(ns.size), x) == pytest.approx(np.ones(11))
    assert lagrange_eval(ns, ns.nodes, x) == pytest.approx(x, abs=1e-14)


# Tests interpolation of sin against a Vandermonde solve.
def test_matches_vandermonde_interpolant():
    ns = chebyshev_zeros(5, 0.0, 1.0)
    coeffs = np.linalg.solve(np.vander(ns.nodes), np.sin(ns.nodes))
    assert lagrange_eval(ns, np.sin(ns.nodes), 0.3) == pytest.approx(np.polyval(coeffs, 0.3), abs=1e-13)


# Tests exactness at nodes, including vector-valued data.
def test_exact_at_nodes():
    ns = chebyshev_extrema(5, -1.0, 0.0)
    values = np.column_stack([np.cos(ns.nodes), np.exp(ns.nodes)])
    assert np.array_equal(lagrange_eval(ns, values, ns.nodes), values)


# Tests polynomial reproduction for degree n on a dense grid.
def test_polynomial_reproduction():
    ns = chebyshev_extrema(12, -1.0, 2.0)
    coeffs = rng.normal(size=13)
    x = np.linspace(-1.0, 2.0, 500)
    exact = np.polyval(coeffs, x)
    approx = lagrange_eval(ns, np.polyval(coeffs, ns.nodes), x)
    assert np.max(np.abs(approx - exact)) <= 1e-11 * np.max(np.abs(exact))


# Tests antiderivatives at the left endpoint, total mass and the two-node case.
def test_cardinal_antiderivatives_basic():
    ns = chebyshev_zeros(8, 0.0, 2.0)
    assert np.max(np.abs(cardinal_antiderivatives(ns, 0.0))) <= 1e-14
    assert cardinal_antiderivatives(ns, 2.0).sum() == pytest.approx(2.0, abs=1e-13)
    linear = custom_nodes([0.0, 1.0], 0.0, 1.0)
    assert cardinal_antiderivatives(linear, 1.0) == pytest.approx([0.5, 0.5], abs=1e-14)


# Tests that the derivative of the antiderivatives recovers the cardinal values.
@pytest.mark.parametrize("ns", [chebyshev_zeros(10, 0.0, 1.0), chebyshev_extrema(7, -2.0, 0.0)])
def test_cardinal_antiderivatives_derivative(ns):
    step = 1e-6
    for x in np.linspace(ns.a + 0.01, ns.b - 0.01, 7):
        derivative = (cardinal_antiderivatives(ns, x + step) - cardinal_antiderivatives(ns, x - step)) / (2 * step)
        assert derivative == pytest.approx(cardinal_values(ns, x), abs=1e-5)


# Tests that integrating interpolated data is linear in the node values and exact for polynomials.
def test_cardinal_antiderivatives_integrate_polynomials():
    ns = chebyshev_zeros(4, 0.0, 1.0)
    x = 0.7
    weights = cardinal_antiderivatives(ns, x)
    assert weights @ ns.nodes ** 3 == pytest.approx(x ** 4 / 4, abs=1e-14)
    assert weights @ (2 * ns.nodes + 3 * ns.nodes ** 2) == pytest.approx(
        2 * (weights @ ns.nodes) + 3 * (weights @ ns.nodes ** 2), abs=1e-15)


# Tests the Lebesgue constant of two Chebyshev zeros and of one node.
def test_lebesgue_small_cases():
    assert lebesgue_constant(chebyshev_zeros(1, -1.0, 1.0)) == pytest.approx(math.sqrt(2), abs=1e-3)
    assert lebesgue_constant(chebyshev_zeros(0, -1.0, 1.0)) == pytest.approx(1.0)


# Tests the logarithmic bound on Chebyshev-zero Lebesgue constants for N <= 50.
def test_lebesgue_bound_chebyshev_zeros():
    for n in range(51):
        bound = 2.0 / math.pi * math.log(n + 1) + 1.0
        assert lebesgue_constant(chebyshev_zeros(n, 0.0, 1.0)) <= bound + 1e-12


# Tests that a too coarse probe grid is refused.
def test_lebesgue_probe_density_validation():
    with pytest.raises(ValueError):
        lebesgue_constant(chebyshev_zeros(3, 0.0, 1.0), probe_density=5)
