"""Convergence sweeps: error of one eigenvalue against a reference as the discretization grows."""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Optional, Sequence, Tuple

import numpy as np

from common.errors import DelaySpectraError, TooFewPointsError
from discretize.config import DiscConfig, Method
from discretize.context import uniform_pieces
from discretize.reduce import build_evolution_matrix
from problems.spec import ProblemSpec
from spectra.eig import eig_dense

logger = logging.getLogger(__name__)

# errors at or below this are rounding noise and are left out of order fits
PLATEAU = 1e-14
REFINEMENTS = ("index", "degree", "pieces")


@dataclass(frozen=True)
class ConvergenceRow:
    """
    One sweep entry.

    Attributes:
        N (int): Swept quantity: X+ index, piece degree, or number of pieces.
        M (int): X grid index used.
        eigenvalue (complex | None): Eigenvalue closest to the reference.
        error (float | None): |eigenvalue - reference|.
        condition_estimate (float | None): Of I - U2.
        failure (str | None): Error message when this entry failed.
    """

    N: int
    M: int
    eigenvalue: Optional[complex] = None
    error: Optional[float] = None
    condition_estimate: Optional[float] = None
    failure: Optional[str] = None


@dataclass(frozen=True)
class ConvergenceTable:
    rows: Tuple[ConvergenceRow, ...]
    reference: complex
    provenance: str
    refine: str = "index"

    @property
    def failures(self) -> int:
        return sum(1 for row in self.rows if row.failure is not None)


def sweep_config(template: DiscConfig, n: int, refine: str, m_offset: int) -> DiscConfig:
    """Settings for one sweep entry."""
    if refine == "index":
        return replace(template, N=n, M=n + m_offset)
    if refine == "degree":
        return replace(template, N=n, M=n + m_offset, method=Method.PIECEWISE)
    return replace(template, method=Method.PIECEWISE, pieces=uniform_pieces(template.h, n))


def _run_entry(problem, cfg, n, reference):
    try:
        result = build_evolution_matrix(problem, cfg)
        spectrum = eig_dense(result.data)
    except DelaySpectraError as e:
        logger.warning("sweep entry N=%d failed: %s", n, e)
        return ConvergenceRow(n, cfg.M, failure=str(e))
    _, value = spectrum.nearest(reference)
    error = float(abs(value - reference))
    logger.info("sweep N=%d M=%d: error %.3e", n, cfg.M, error)
    return ConvergenceRow(n, cfg.M, value, error, result.condition_estimate)


def convergence_sweep(
    p: ProblemSpec,
    template: DiscConfig,
    n_list: Sequence[int],
    reference: complex,
    provenance: str = "value",
    refine: str = "index",
    workers: int = 1,
    m_offset: int = 1,
) -> ConvergenceTable:
    """
    Error of the eigenvalue nearest to reference for each entry of n_list.

    refine="index" sets N = n and M = n + m_offset; "degree" does the same
    for piecewise collocation on the template's pieces; "pieces" keeps the
    template degree and uses n uniform pieces. A failing entry is recorded
    in its row and the sweep goes on. Entries may run on several threads.

    Raises:
        ValueError: If n_list is not strictly increasing, reference is not
            finite, or refine is unknown.
    """
    n_list = [int(n) for n in n_list]
    if any(b <= a for a, b in zip(n_list, n_list[1:])):
        raise ValueError("n_list must be strictly increasing")
    if not np.isfinite(complex(reference)):
        raise ValueError("reference must be finite")
    if refine not in REFINEMENTS:
        raise ValueError(f"refine must be one of {', '.join(REFINEMENTS)}")
    configs = [sweep_config(template, n, refine, m_offset) for n in n_list]
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        rows = list(pool.map(lambda item: _run_entry(p, item[1], item[0], reference), zip(n_list, configs)))
    return ConvergenceTable(tuple(rows), complex(reference), provenance, refine)


def order_estimate(t: ConvergenceTable) -> float:
    """
    Least-squares slope of log(error) against log(N) above the rounding plateau.

    Raises:
        TooFewPointsError: If fewer than 3 rows have an error above 1e-14.
    """
    usable = [row for row in t.rows if row.error is not None and row.error > PLATEAU]
    if len(usable) < 3:
        raise TooFewPointsError(f"need 3 rows with error above {PLATEAU:g}, have {len(usable)}")
    x = np.log([row.N for row in usable])
    y = np.log([row.error for row in usable])
    return float(np.polyfit(x, y, 1)[0])
