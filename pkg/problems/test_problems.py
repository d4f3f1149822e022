"""Tests for problem definitions, coefficient evaluation, validation and the characteristic matrix."""

import cmath
import math

import numpy as np
import pytest

from common.errors import CoefficientError, ExprSyntaxError, NumericalWarning, ValidationError
from problems import (
    CoeffMatrix,
    DiscreteTerm,
    KernelMatrix,
    KernelTerm,
    ProblemKind,
    ProblemSpec,
    SegmentQuery,
    characteristic_matrix,
    eval_coeff,
    eval_kernel,
    is_autonomous,
    validate,
)


def _hayes():
    return ProblemSpec(ProblemKind.RFDE, 1, 1.0, discrete=(DiscreteTerm(1.0, CoeffMatrix.parse([["-(pi/2)"]])),))


def _renewal():
    return ProblemSpec(ProblemKind.RE, 1, 3.0, kernels=(KernelTerm(KernelMatrix.parse([["1/2"]], (-3, -1))),))


# Tests that the scalar delay equation x' = -x(t-1) is accepted unchanged.
def test_validate_accepts_scalar_rfde():
    p = ProblemSpec(ProblemKind.RFDE, 1, 1.0, discrete=(DiscreteTerm(1.0, CoeffMatrix.parse([["-1"]])),))
    assert validate(p) == p


# Tests that a delay above max_delay is rejected.
def test_validate_delay_exceeds_max_delay():
    p = ProblemSpec(ProblemKind.RFDE, 1, 1.0, discrete=(DiscreteTerm(2.0, CoeffMatrix.parse([["-1"]])),))
    with pytest.raises(ValidationError, match="delay exceeds max_delay"):
        validate(p)


# Tests that a renewal kernel on part of [-tau, 0] is accepted and its bound sampled.
def test_validate_renewal_equation():
    p = validate(_renewal())
    assert p.kernels[0].support == (-3.0, -1.0)
    assert p.kernel_bound == pytest.approx(0.5)


# Tests that unsorted delays are sorted with a warning.
def test_validate_sorts_delays():
    p = ProblemSpec(ProblemKind.RFDE, 1, 2.0, discrete=(
        DiscreteTerm(2.0, CoeffMatrix.parse([["1"]])),
        DiscreteTerm(0.5, CoeffMatrix.parse([["2"]])),
    ))
    with pytest.warns(NumericalWarning):
        fixed = validate(p)
    assert fixed.delays == (0.5, 2.0)


# Tests that equal delays are merged by adding their coefficients.
def test_validate_merges_equal_delays():
    p = ProblemSpec(ProblemKind.RFDE, 1, 1.0, discrete=(
        DiscreteTerm(1.0, CoeffMatrix.parse([["-1"]])),
        DiscreteTerm(1.0, CoeffMatrix.parse([["-2*cos(t)"]])),
    ))
    fixed = validate(p)
    assert len(fixed.discrete) == 1
    assert eval_coeff(fixed.discrete[0].B, 0.0)[0, 0] == pytest.approx(-3.0)


# Tests the structural rejections with their key paths.
@pytest.mark.parametrize("problem, key", [
    (ProblemSpec(ProblemKind.RFDE, 1, 1.0, discrete=(DiscreteTerm(0.5, CoeffMatrix.parse([["1"]])),)),
     "problem.max_delay"),
    (ProblemSpec(ProblemKind.RFDE, 1, 0.0), "problem.max_delay"),
    (ProblemSpec(ProblemKind.RFDE, 2, 1.0, A=CoeffMatrix.parse([["1"]])), "problem.A"),
    (ProblemSpec(ProblemKind.RE, 1, 1.0), "problem.kernels"),
    (ProblemSpec(ProblemKind.RE, 1, 1.0, A=CoeffMatrix.parse([["1"]]),
                 kernels=(KernelTerm(KernelMatrix.parse([["1"]], (-1, 0))),)), "problem"),
    (ProblemSpec(ProblemKind.RFDE, 1, 1.0, kernels=(
        KernelTerm(KernelMatrix.parse([["1"]], (-1, -0.2))),
        KernelTerm(KernelMatrix.parse([["1"]], (-0.5, 0))),
    )), "problem.kernels"),
    (ProblemSpec(ProblemKind.RFDE, 1, 1.0, kernels=(KernelTerm(KernelMatrix.parse([["1"]], (-2, 0))),)),
     "problem.kernels[0].support"),
    (ProblemSpec(ProblemKind.RFDE, 1, 1.0, A=CoeffMatrix.parse([["cos(t)"]]), period=1.0), "problem.A"),
])
def test_validate_rejections(problem, key):
    with pytest.raises(ValidationError) as info:
        validate(problem)
    assert info.value.key_path == key


# Tests that theta is refused outside kernels and reported with its position.
def test_theta_only_in_kernels():
    with pytest.raises(ExprSyntaxError) as info:
        CoeffMatrix.parse([["1", "theta"], ["0", "1"]], key_path="problem.A")
    assert info.value.key_path == "problem.A[0][1]"
    assert KernelMatrix.parse([["exp(theta)"]], (-1, 0)).variables() == {"theta"}


# Tests that validate is idempotent.
@pytest.mark.parametrize("problem", [_hayes(), _renewal(), ProblemSpec(ProblemKind.RFDE, 1, 2.0, discrete=(
    DiscreteTerm(2.0, CoeffMatrix.parse([["1"]])),
    DiscreteTerm(2.0, CoeffMatrix.parse([["t"]])),
))])
def test_validate_idempotent(problem):
    once = validate(problem)
    assert validate(once) == once


# Tests constant and time-dependent entries.
def test_eval_coeff_examples():
    c = CoeffMatrix.parse([["1", "-2"], ["0.5", "1 + 2*cos(t)"]])
    assert np.array_equal(eval_coeff(c, 7.0)[0], [1.0, -2.0])
    assert eval_coeff(c, 0.0)[1, 1] == pytest.approx(3.0)
    assert abs(eval_coeff(CoeffMatrix.parse([["cos(2*pi*t)"]]), 0.25)[0, 0]) <= 1e-15


# Tests that evaluation errors name the time and the entry.
def test_eval_coeff_domain_error():
    c = CoeffMatrix.parse([["1", "0"], ["0", "1/t"]])
    with pytest.raises(CoefficientError) as info:
        eval_coeff(c, 0.0)
    assert info.value.t == 0.0
    assert info.value.entry == (1, 1)


# Tests kernel sampling shape with constant and theta-dependent entries.
def test_eval_kernel_shape():
    c = KernelMatrix.parse([["1", "theta"], ["t*theta", "0"]], (-1, 0))
    theta = np.linspace(-1, 0, 5)
    values = eval_kernel(c, 2.0, theta)
    assert values.shape == (5, 2, 2)
    assert np.array_equal(values[:, 0, 0], np.ones(5))
    assert values[:, 1, 0] == pytest.approx(2.0 * theta)


# Tests periodicity of the delayed Mathieu coefficient on random times.
def test_periodic_coefficient_samples():
    c = CoeffMatrix.parse([["-0.5 + 0.5*cos(2*pi*t)"]])
    for t in np.random.default_rng(3).uniform(-5, 5, 100):
        assert eval_coeff(c, t) == pytest.approx(eval_coeff(c, t + 1.0), abs=1e-10)


# Tests the autonomy predicate.
def test_is_autonomous():
    assert is_autonomous(_hayes())
    assert is_autonomous(_renewal())
    assert not is_autonomous(ProblemSpec(ProblemKind.RFDE, 1, 1.0, A=CoeffMatrix.parse([["sin(t)"]])))


# Tests the Hayes root i pi / 2.
def test_characteristic_matrix_hayes():
    assert abs(characteristic_matrix(_hayes(), 0.5j * math.pi)[0, 0]) <= 1e-14


# Tests the ODE case Delta(a) = 0.
def test_characteristic_matrix_ode():
    p = ProblemSpec(ProblemKind.RFDE, 1, 1.0, A=CoeffMatrix.parse([["-0.7"]]))
    assert abs(characteristic_matrix(p, -0.7)[0, 0]) <= 1e-15


# Tests the renewal root lambda = 0 and one value against the closed form.
def test_characteristic_matrix_renewal():
    p = _renewal()
    assert abs(characteristic_matrix(p, 0.0)[0, 0]) <= 1e-14
    lam = 0.3 + 0.2j
    exact = 1 - 0.5 * (cmath.exp(-lam) - cmath.exp(-3 * lam)) / lam
    assert characteristic_matrix(p, lam)[0, 0] == pytest.approx(exact, abs=1e-13)


# Tests that finite-difference derivatives in lambda agree across step halving.
def test_characteristic_matrix_smooth_in_lambda():
    p = ProblemSpec(ProblemKind.RFDE, 1, 1.0, A=CoeffMatrix.parse([["0.3"]]),
                    discrete=(DiscreteTerm(1.0, CoeffMatrix.parse([["-1"]])),),
                    kernels=(KernelTerm(KernelMatrix.parse([["theta^2"]], (-1, 0))),))
    lam = 0.4 + 1.1j

    def derivative(step):
        return (characteristic_matrix(p, lam + step) - characteristic_matrix(p, lam - step))[0, 0] / (2 * step)

    assert abs(derivative(1e-6) / derivative(5e-7) - 1) <= 1e-3


# Tests that time-dependent problems are refused.
def test_characteristic_matrix_non_autonomous():
    with pytest.raises(ValueError):
        characteristic_matrix(ProblemSpec(ProblemKind.RFDE, 1, 1.0, A=CoeffMatrix.parse([["t"]])), 1.0)


# Tests the segment point and its range check.
def test_segment_query():
    q = SegmentQuery(0.25, -1.0)
    assert q.point == -0.75
    assert q.check(1.0, 0.5) is q
    with pytest.raises(ValueError):
        SegmentQuery(0.5, 0.0).check(1.0, 0.4)
