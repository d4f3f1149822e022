"""Dense eigenvalues with explicit residuals, and a stability summary of a spectrum."""

import cmath
import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy.linalg import LinAlgError, eig

from common.errors import EigenConvergenceError
from spectra.clusters import DEFAULT_CLUSTER_TOL, dominant_cluster

logger = logging.getLogger(__name__)

# moduli equal to this many decimals count as ties in the ordering
MODULUS_DECIMALS = 12


@dataclass(frozen=True, eq=False)
class Spectrum:
    """
    Eigenvalues of a real square matrix, by descending modulus.

    Ties in modulus are ordered by descending real part, then descending
    imaginary part, so the order is reproducible.

    Attributes:
        eigenvalues (np.ndarray): Complex eigenvalues.
        residuals (np.ndarray): ||A v - mu v|| / (||A||_1 ||v||) per eigenvalue.
        source_size (int): Dimension of the matrix.
    """

    eigenvalues: np.ndarray
    residuals: np.ndarray
    source_size: int

    def __len__(self):
        return len(self.eigenvalues)

    @property
    def dominant(self) -> complex:
        return complex(self.eigenvalues[0])

    def nearest(self, target: complex) -> Tuple[int, complex]:
        """Index and value of the eigenvalue closest to target."""
        k = int(np.argmin(np.abs(self.eigenvalues - target)))
        return k, complex(self.eigenvalues[k])


def _order(values):
    keys = [(-round(abs(v), MODULUS_DECIMALS), -v.real, -v.imag) for v in values]
    return sorted(range(len(values)), key=keys.__getitem__)


def eig_dense(A) -> Spectrum:
    """
    All eigenvalues of a dense real matrix, with residuals re-checked by multiplication.

    Backed by LAPACK (Hessenberg reduction and shifted QR).

    Raises:
        ValueError: If A is not square or has non-finite entries.
        EigenConvergenceError: If the QR iteration does not converge.
    """
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    n = A.shape[0]
    if n == 0:
        return Spectrum(np.zeros(0, dtype=complex), np.zeros(0), 0)
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    try:
        values, vectors = eig(A)
    except LinAlgError as e:
        raise EigenConvergenceError(n) from e

    scale = np.linalg.norm(A, 1) or 1.0
    residuals = np.linalg.norm(A @ vectors - vectors * values, axis=0) / (scale * np.linalg.norm(vectors, axis=0))
    order = _order(values)
    logger.debug("eigenvalues of a %dx%d matrix, max residual %.2e", n, n, float(np.max(residuals)))
    return Spectrum(values[order], residuals[order], n)


@dataclass(frozen=True)
class StabilitySummary:
    """
    Verdict read off the multipliers of an evolution operator over a step h.

    Attributes:
        dominant (complex): Multiplier of largest modulus.
        modulus (float): Its modulus; below 1 means asymptotic stability.
        stable (bool): modulus < 1.
        exponents (tuple[complex, ...]): log(mu) / h for the dominant cluster.
    """

    dominant: complex
    modulus: float
    stable: bool
    exponents: Tuple[complex, ...]


def stability_summary(spectrum: Spectrum, h: float, rel_tol: float = DEFAULT_CLUSTER_TOL) -> StabilitySummary:
    """
    Summarize the dominant multipliers of T = U(s + h, s).

    Raises:
        ValueError: On an empty spectrum or h <= 0.
    """
    if len(spectrum) == 0:
        raise ValueError("empty spectrum")
    if not h > 0:
        raise ValueError("h must be positive")
    top = abs(spectrum.dominant)
    members = [complex(spectrum.eigenvalues[k]) for k in dominant_cluster(spectrum, rel_tol).members]
    exponents = tuple(cmath.log(v) / h for v in members if v != 0)
    return StabilitySummary(spectrum.dominant, top, top < 1.0, exponents)
