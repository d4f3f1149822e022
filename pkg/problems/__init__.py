"""Equation classes: linear RFDEs and renewal equations, their coefficients and validation."""

from problems.evaluate import characteristic_matrix, eval_coeff, eval_kernel, is_autonomous
from problems.spec import (
    CoeffMatrix,
    DiscreteTerm,
    KernelMatrix,
    KernelTerm,
    ProblemKind,
    ProblemSpec,
    SegmentQuery,
)
from problems.validate import validate
