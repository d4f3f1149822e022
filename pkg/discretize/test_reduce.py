"""Tests for the reduction to the evolution matrix and its spectral behaviour."""

import cmath
import math
import warnings
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest

from common.errors import NumericalError, NumericalWarning, SingularSystemError
from discretize import (
    Blocks,
    DiscConfig,
    Method,
    build_context,
    build_evolution_matrix,
    fs_row,
    solve_reduced,
)
from discretize.assemble import residual_cuts
from discretize.reduce import assemble
from problems import CoeffMatrix, DiscreteTerm, KernelMatrix, KernelTerm, ProblemKind, ProblemSpec, validate

rng = np.random.default_rng(11)


def _hayes():
    return validate(ProblemSpec(ProblemKind.RFDE, 1, 1.0,
                                discrete=(DiscreteTerm(1.0, CoeffMatrix.parse([["-(pi/2)"]])),)))


def _dominant(matrix, count=2):
    values = np.linalg.eigvals(matrix)
    return values[np.argsort(-np.abs(values))][:count]


def _near(values, target):
    return np.min(np.abs(np.asarray(values) - target))


def _synthetic(U2):
    n = U2.shape[0]
    T1, T2, U1 = rng.normal(size=(3, 3)), rng.normal(size=(3, n)), rng.normal(size=(n, 3))
    return Blocks(T1, T2, U1, U2, None, None, None)


# Tests that U2 = 0 reduces to T1 + T2 U1.
def test_zero_u2():
    blocks = _synthetic(np.zeros((4, 4)))
    result = solve_reduced(blocks)
    assert result.data == pytest.approx(blocks.T1 + blocks.T2 @ blocks.U1, abs=1e-14)
    assert result.condition_estimate == pytest.approx(1.0)
    assert result.warnings == ()


# Tests that a large U2 is reported but still solved.
def test_large_u2_warns():
    blocks = _synthetic(np.diag([2.0, 3.0]))
    with pytest.warns(NumericalWarning):
        result = solve_reduced(blocks)
    assert len(result.warnings) == 1
    expected = blocks.T1 + blocks.T2 @ np.diag([-1.0, -0.5]) @ blocks.U1
    assert result.data == pytest.approx(expected, abs=1e-13)


# Tests that a singular I - U2 raises with its condition estimate.
def test_singular_system():
    with pytest.raises(SingularSystemError) as info:
        solve_reduced(_synthetic(np.eye(3)))
    assert info.value.condition_estimate == float("inf")


# Tests that concurrent reductions leave the global warning filters untouched.
def test_threaded_solves_keep_warning_filters():
    before = list(warnings.filters)
    systems = [_synthetic(np.eye(3))] + [_synthetic(np.diag([0.5, 0.25])) for _ in range(15)]

    def reduce(blocks):
        try:
            return solve_reduced(blocks).size
        except SingularSystemError:
            return None

    with ThreadPoolExecutor(max_workers=8) as pool:
        sizes = list(pool.map(reduce, systems))
    assert sizes == [None] + [3] * 15
    assert warnings.filters == before


# Tests that non-finite blocks are reported as a numerical failure.
def test_non_finite_u2():
    with pytest.raises(NumericalError):
        solve_reduced(_synthetic(np.array([[np.nan, 0.0], [0.0, 0.5]])))


# Tests mismatched block shapes.
def test_block_shape_check():
    with pytest.raises(ValueError):
        Blocks(np.zeros((2, 2)), np.zeros((2, 3)), np.zeros((3, 2)), np.zeros((2, 2)), None, None, None)


# Tests the scalar ODE flow exp(-1) at N = 10.
def test_ode_dominant_eigenvalue():
    p = validate(ProblemSpec(ProblemKind.RFDE, 1, 1.0, A=CoeffMatrix.parse([["-1"]])))
    result = build_evolution_matrix(p, DiscConfig(M=11, N=10, h=1.0))
    assert abs(_dominant(result.data, 1)[0] - math.exp(-1)) <= 1e-12
    assert np.isfinite(result.condition_estimate)


# Tests the Hayes multipliers +-i at N = 20.
def test_hayes_multipliers():
    result = build_evolution_matrix(_hayes(), DiscConfig(M=21, N=20, h=1.0))
    top = _dominant(result.data)
    assert _near(top, 1j) <= 1e-8 and _near(top, -1j) <= 1e-8


# Tests the renewal multiplier 1 at N = 20.
def test_renewal_multiplier_one():
    p = validate(ProblemSpec(ProblemKind.RE, 1, 3.0, kernels=(KernelTerm(KernelMatrix.parse([["1/2"]], (-3, -1))),)))
    result = build_evolution_matrix(p, DiscConfig(M=20, N=20, h=3.0))
    assert _near(np.linalg.eigvals(result.data), 1.0) <= 1e-8


# Tests that Z* solves the discrete fixed-point equation at independently rebuilt rows.
@pytest.mark.parametrize("cfg", [DiscConfig(M=13, N=12, h=1.0), DiscConfig(M=9, N=8, h=0.5)])
def test_discrete_fixed_point_residual(cfg):
    p = _hayes()
    result = build_evolution_matrix(p, cfg)
    ctx = build_context(p, cfg)
    phi = rng.normal(size=ctx.x_size)
    z = result.z_operator @ phi
    image = np.concatenate([fs_row(ctx, float(t)).apply(phi, z) for t in ctx.z_basis.nodes])
    assert np.max(np.abs(z - image)) <= 1e-9 * np.max(np.abs(z))


# Tests the semigroup law: eig T(2h) against the squares of eig T(h).
def test_semigroup_spectra():
    p = _hayes()
    one = _dominant(build_evolution_matrix(p, DiscConfig(M=21, N=20, h=1.0)).data) ** 2
    two = _dominant(build_evolution_matrix(p, DiscConfig(M=21, N=20, h=2.0)).data)
    for value in one:
        assert _near(two, value) <= 1e-6


# Tests that T(0.5)^2 on two shift pieces reproduces the h = 1 multipliers.
def test_shift_pieces_consistency():
    p = _hayes()
    half = build_evolution_matrix(p, DiscConfig(M=21, N=20, h=0.5)).data
    full = _dominant(build_evolution_matrix(p, DiscConfig(M=21, N=20, h=1.0)).data)
    squared = np.linalg.eigvals(half @ half)
    for value in full:
        assert _near(squared, value) <= 1e-5
    assert _near(full, cmath.exp(0.5j * math.pi)) <= 1e-8


# Tests agreement of collocation and weighted residuals on Hayes at N = 20.
def test_weighted_residuals_agree():
    p = _hayes()
    colloc = _dominant(build_evolution_matrix(p, DiscConfig(M=21, N=20, h=1.0)).data)
    wr = np.linalg.eigvals(build_evolution_matrix(
        p, DiscConfig(M=21, N=20, h=1.0, method=Method.WEIGHTED_RESIDUALS)).data)
    for value in colloc:
        assert _near(wr, value) <= 1e-6


# Tests the spectral element variant on Hayes.
def test_piecewise_multipliers():
    cfg = DiscConfig(M=8, N=8, h=1.0, method=Method.PIECEWISE, pieces=(0.0, 0.25, 0.5, 0.75, 1.0))
    top = _dominant(build_evolution_matrix(_hayes(), cfg).data)
    assert _near(top, 1j) <= 1e-8 and _near(top, -1j) <= 1e-8


# Tests that refining quadratic elements reduces the error.
def test_finite_element_refinement():
    errors = []
    for count in (2, 4, 8):
        pieces = tuple(np.linspace(0.0, 1.0, count + 1))
        cfg = DiscConfig(M=2, N=2, h=1.0, method=Method.PIECEWISE, pieces=pieces)
        errors.append(_near(np.linalg.eigvals(build_evolution_matrix(_hayes(), cfg).data), 1j))
    assert errors[0] > errors[1] > errors[2]


# Tests that the weighted-residual blocks match the assembly dispatcher.
def test_assemble_dispatch():
    cfg = DiscConfig(M=6, N=5, h=1.0, method=Method.WEIGHTED_RESIDUALS)
    blocks = assemble(_hayes(), cfg)
    assert blocks.z_basis.size == 6


# Tests that weighted-residual quadrature is cut at delays and at kernel support ends.
def test_residual_cuts_follow_problem_breakpoints():
    p = validate(ProblemSpec(ProblemKind.RFDE, 1, 1.0, A=CoeffMatrix.parse([["-1"]]),
                             kernels=(KernelTerm(KernelMatrix.parse([["0.5"]], (-1, -0.5))),)))
    assert p.breakpoints() == (-1.0, -0.5, 0.0)
    cfg = DiscConfig(M=6, N=5, h=1.0, method=Method.WEIGHTED_RESIDUALS)
    assert residual_cuts(build_context(p, cfg)) == [(0.0, 0.5), (0.5, 1.0)]
    assert residual_cuts(build_context(_hayes(), cfg)) == [(0.0, 1.0)]
