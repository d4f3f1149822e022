"""Grid setup for one discretization: X grid on [-tau, 0] and X+ basis on [0, h].

When h < tau the history interval is cut into Q = ceil(tau / h) pieces
[max(-q h, -tau), -(q - 1) h], q = Q..1, so that the shift x -> h + x maps
every piece but the last onto its right neighbour.
"""

import logging
import math
from dataclasses import dataclass, replace
from typing import Tuple, Union

import numpy as np

from common.cache import LRUCache
from common.errors import ValidationError
from discretize.basis import LegendreBasis, PiecewiseBasis
from discretize.config import DiscConfig, Method
from grids.nodes import NodeFamily, NodeSet, chebyshev_extrema, chebyshev_zeros
from problems.spec import ProblemKind, ProblemSpec

logger = logging.getLogger(__name__)

_NODE_SETS = LRUCache(256)
_BUILDERS = {
    NodeFamily.CHEBYSHEV_ZEROS: chebyshev_zeros,
    NodeFamily.CHEBYSHEV_EXTREMA: chebyshev_extrema,
}
# pieces shorter than this fraction of h are dropped when clipping to [-tau, 0]
PIECE_TOL = 1e-12


def node_set(family: NodeFamily, index: int, a: float, b: float) -> NodeSet:
    """Memoized Chebyshev node set; NodeSets are immutable, so sharing is safe."""
    key = (family, index, float(a), float(b))
    return _NODE_SETS.get_or_create(key, lambda: _BUILDERS[family](index, a, b))


@dataclass(frozen=True, eq=False)
class DiscContext:
    """
    Everything row assembly needs: the problem, its settings and both bases.

    Attributes:
        problem (ProblemSpec): Validated problem.
        config (DiscConfig): Checked settings.
        x_basis (PiecewiseBasis): X grid on [-tau, 0]; closed node set per piece.
        z_basis (PiecewiseBasis | LegendreBasis): X+ basis on [0, h].
        shift_count (int): Q, the number of history pieces of length h.
    """

    problem: ProblemSpec
    config: DiscConfig
    x_basis: PiecewiseBasis
    z_basis: Union[PiecewiseBasis, LegendreBasis]
    shift_count: int

    @property
    def dim(self) -> int:
        return self.problem.dim

    @property
    def h(self) -> float:
        return self.config.h

    @property
    def x_size(self) -> int:
        return self.dim * self.x_basis.size

    @property
    def z_size(self) -> int:
        return self.dim * self.z_basis.size


def uniform_pieces(h: float, count: int) -> Tuple[float, ...]:
    """Partition of [0, h] into count equal pieces."""
    if count < 1:
        raise ValueError("count must be at least 1")
    points = np.linspace(0.0, h, count + 1)
    points[0], points[-1] = 0.0, h
    return tuple(float(v) for v in points)


def _history_pieces(tau: float, h: float, count: int) -> Tuple[Tuple[float, float], ...]:
    out = []
    for q in range(count, 0, -1):
        out.append((-tau if q == count else -q * h, -(q - 1) * h if q > 1 else 0.0))
    return tuple(out)


def _shifted_pieces(partition, tau: float, h: float):
    out = []
    for a, b in zip(partition, partition[1:]):
        lo, hi = max(a - h, -tau), b - h
        if hi - lo > PIECE_TOL * h:
            out.append((lo, hi))
    return tuple(out)


def build_context(p: ProblemSpec, cfg: DiscConfig) -> DiscContext:
    """
    Set up the grids for one discretization.

    X+ is Chebyshev zeros on [0, h] (per piece when pieces are given),
    orthonormal Legendre for weighted residuals, or continuous piecewise
    Chebyshev extrema for the piecewise method. The X grid is Chebyshev
    extrema on [-tau, 0], on the shift pieces when h < tau, or on the X+
    partition translated by -h for the piecewise method.

    Raises:
        ValidationError: On h <= 0, indices that do not suit the method,
            weighted residuals for a renewal equation, pieces with weighted
            residuals, or the piecewise method with h < tau.
    """
    cfg.check(p.kind)
    tau, h = p.max_delay, cfg.h
    count = max(1, math.ceil(tau / h - 1e-9))

    if cfg.method is Method.WEIGHTED_RESIDUALS:
        if p.kind is ProblemKind.RE:
            raise ValidationError("weighted residuals are available for RFDEs only", "disc.method")
        if cfg.pieces is not None:
            raise ValidationError("weighted residuals do not take pieces", "disc.pieces")
        z_basis = LegendreBasis(cfg.N, (0.0, h))
        x_intervals = _history_pieces(tau, h, count)
    elif cfg.method is Method.PIECEWISE:
        if count > 1:
            raise ValidationError(f"the piecewise method needs h >= tau, got h = {h} < {tau}", "disc.h")
        partition = cfg.partition()
        z_basis = PiecewiseBasis(tuple(
            node_set(NodeFamily.CHEBYSHEV_EXTREMA, cfg.N, a, b) for a, b in zip(partition, partition[1:])
        ), shared=True)
        x_intervals = _shifted_pieces(partition, tau, h)
    else:
        partition = cfg.partition()
        z_basis = PiecewiseBasis(tuple(
            node_set(NodeFamily.CHEBYSHEV_ZEROS, cfg.N, a, b) for a, b in zip(partition, partition[1:])
        ))
        x_intervals = _history_pieces(tau, h, count)

    x_basis = PiecewiseBasis(tuple(node_set(NodeFamily.CHEBYSHEV_EXTREMA, cfg.M, a, b) for a, b in x_intervals))
    ctx = DiscContext(p, cfg, x_basis, z_basis, count)
    logger.info("context %s: method=%s Q=%d X pieces=%d size=%d, X+ size=%d",
                p.label or p.kind.value, cfg.method.value, count, len(x_intervals), ctx.x_size, ctx.z_size)
    return ctx


def piecewise_partition(ctx: DiscContext, degree: int, pieces) -> DiscContext:
    """
    Rebuild a context for piecewise collocation of the given degree on a partition of [0, h].

    Raising degree at fixed pieces is the spectral element sweep; refining
    pieces at fixed degree is the finite element sweep.

    Raises:
        ValidationError: On a degenerate piece or a partition not covering [0, h].
    """
    pieces = tuple(float(v) for v in pieces)
    if any(b - a <= 0 for a, b in zip(pieces, pieces[1:])):
        raise ValidationError("degenerate piece (length <= 0)", "disc.pieces")
    cfg = replace(ctx.config, N=degree, M=max(ctx.config.M, degree), method=Method.PIECEWISE, pieces=pieces)
    return build_context(ctx.problem, cfg)
