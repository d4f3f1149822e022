"""Discretization settings."""

import enum
from dataclasses import dataclass
from typing import Optional, Tuple

from common.errors import ValidationError
from problems.spec import ProblemKind

MIN_QUAD_POINTS = 32


class Method(enum.Enum):
    COLLOCATION = "collocation"
    WEIGHTED_RESIDUALS = "weighted-residuals"
    PIECEWISE = "piecewise"


@dataclass(frozen=True)
class DiscConfig:
    """
    Discretization indices and method for one evolution operator T = U(s + h, s).

    Attributes:
        M (int): Index of the X grid on [-tau, 0] (per piece when h < tau).
        N (int): Index of the X+ reduction on [0, h]; per-piece degree for the piecewise method.
        h (float): Step > 0.
        s (float): Initial time.
        method (Method): Collocation, weighted residuals or piecewise collocation.
        pieces (tuple[float, ...] | None): Partition 0 = p_0 < ... < p_m = h of [0, h].
        quad_order (int | None): Clenshaw-Curtis points per smooth sub-interval;
            None means max(2(N+1), 32).
    """

    M: int
    N: int
    h: float
    s: float = 0.0
    method: Method = Method.COLLOCATION
    pieces: Optional[Tuple[float, ...]] = None
    quad_order: Optional[int] = None

    @property
    def quad_points(self) -> int:
        if self.quad_order is not None:
            return self.quad_order
        return max(2 * (self.N + 1), MIN_QUAD_POINTS)

    def partition(self) -> Tuple[float, ...]:
        return self.pieces if self.pieces is not None else (0.0, self.h)

    def check(self, kind: ProblemKind) -> "DiscConfig":
        """
        Raise ValidationError unless the indices suit the method and problem kind.

        Collocation and weighted residuals need M >= N + 1 for RFDEs and M >= N
        for REs; the piecewise method needs M >= N.
        """
        if not self.h > 0:
            raise ValidationError(f"step must be positive, got {self.h}", "disc.h")
        if self.N < 0:
            raise ValidationError(f"N must be nonnegative, got {self.N}", "disc.N")
        if self.M < 1:
            raise ValidationError(f"M must be positive, got {self.M}", "disc.M")
        if self.method is Method.PIECEWISE and self.N < 1:
            raise ValidationError("piecewise degree N must be at least 1", "disc.N")
        needed = self.N + 1 if kind is ProblemKind.RFDE and self.method is not Method.PIECEWISE else self.N
        if self.M < needed:
            raise ValidationError(f"M must be at least {needed} for N = {self.N}, got {self.M}", "disc.M")
        if self.quad_order is not None and self.quad_order < 2:
            raise ValidationError("quad_order must be at least 2", "disc.quad_order")
        if self.pieces is not None:
            pieces = self.pieces
            if len(pieces) < 2 or pieces[0] != 0.0 or abs(pieces[-1] - self.h) > 1e-12 * max(1.0, self.h):
                raise ValidationError(f"pieces must run from 0 to h = {self.h}", "disc.pieces")
            if any(b <= a for a, b in zip(pieces, pieces[1:])):
                raise ValidationError("pieces must be strictly increasing", "disc.pieces")
        return self
