"""Grouping of eigenvalues that agree to a relative tolerance."""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, List, Tuple

import numpy as np

if TYPE_CHECKING:
    from spectra.eig import Spectrum

DEFAULT_CLUSTER_TOL = 1e-6


@dataclass(frozen=True)
class Cluster:
    """
    Eigenvalues within rel_tol * max(|center|, 1) of center.

    Attributes:
        center (complex): The first (largest-modulus) member.
        members (tuple[int, ...]): Indices into the spectrum.
    """

    center: complex
    members: Tuple[int, ...]

    @property
    def multiplicity(self) -> int:
        return len(self.members)


def cluster(s: Spectrum, rel_tol: float = DEFAULT_CLUSTER_TOL) -> List[Cluster]:
    """
    Greedy clustering in spectrum order.

    Each unassigned eigenvalue opens a cluster and collects every unassigned
    eigenvalue within rel_tol * max(|center|, 1). Conjugates are never merged
    unless they are that close.

    Raises:
        ValueError: If rel_tol is not in (0, 0.5).
    """
    if not 0 < rel_tol < 0.5:
        raise ValueError("rel_tol must lie in (0, 0.5)")
    values = np.asarray(s.eigenvalues)
    free = np.ones(len(values), dtype=bool)
    out = []
    for k, center in enumerate(values):
        if not free[k]:
            continue
        close = free & (np.abs(values - center) <= rel_tol * max(abs(center), 1.0))
        free &= ~close
        out.append(Cluster(complex(center), tuple(int(i) for i in np.flatnonzero(close))))
    return out


def dominant_cluster(s: Spectrum, rel_tol: float = DEFAULT_CLUSTER_TOL) -> Cluster:
    """
    Eigenvalues whose modulus is within rel_tol * max(|mu_1|, 1) of the largest modulus.

    Unlike cluster(), members need not be close to each other: a conjugate
    pair of dominant multipliers forms one dominant cluster.

    Raises:
        ValueError: On an empty spectrum.
    """
    if len(s) == 0:
        raise ValueError("empty spectrum")
    moduli = np.abs(np.asarray(s.eigenvalues))
    top = float(np.max(moduli))
    members = np.flatnonzero(moduli >= top - rel_tol * max(top, 1.0))
    return Cluster(complex(s.dominant), tuple(int(i) for i in members))


@dataclass(frozen=True)
class Match:
    reference: complex
    other: complex
    delta: float


def match_dominant(reference: Spectrum, other: Spectrum, count: int = 4) -> List[Match]:
    """Pair each of the count largest reference eigenvalues with the nearest eigenvalue of other."""
    out = []
    for value in reference.eigenvalues[:count]:
        _, nearest = other.nearest(value)
        out.append(Match(complex(value), nearest, float(abs(nearest - value))))
    return out
