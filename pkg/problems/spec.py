"""Problem definitions: linear RFDEs in prototype form and linear renewal equations.

An RFDE reads

    x'(t) = A(t) x(t) + sum_k B_k(t) x(t - tau_k) + sum_k int_{support_k} C_k(t, theta) x(t + theta) dtheta

and an RE reads

    x(t) = sum_k int_{support_k} C_k(t, theta) x(t + theta) dtheta,

with every kernel support a sub-interval of [-tau, 0]. Coefficient entries
are CoeffExpr trees, so a problem is plain immutable data.
"""

import enum
from dataclasses import dataclass, field
from typing import Optional, Tuple

from common.errors import ExprSyntaxError
from common.expr import CoeffExpr, parse_expr


def _parse_rows(rows, allowed_vars, key_path):
    parsed = []
    for i, row in enumerate(rows):
        cells = []
        for j, src in enumerate(row):
            try:
                cells.append(parse_expr(str(src), allowed_vars))
            except ExprSyntaxError as e:
                where = f"{key_path}[{i}][{j}]" if key_path else None
                raise ExprSyntaxError(e.reason, e.offset, e.expected, where) from e
        parsed.append(tuple(cells))
    return tuple(parsed)


class ProblemKind(enum.Enum):
    RFDE = "rfde"
    RE = "re"


@dataclass(frozen=True)
class CoeffMatrix:
    """
    d x d matrix of scalar time functions.

    Attributes:
        entries (tuple[tuple[CoeffExpr, ...], ...]): Row-major expressions in ``t``.
    """

    entries: Tuple[Tuple[CoeffExpr, ...], ...]

    @classmethod
    def parse(cls, rows, key_path=None) -> "CoeffMatrix":
        """Build from nested lists of expression strings in ``t``."""
        return cls(_parse_rows(rows, ("t",), key_path))

    @property
    def dim(self) -> int:
        return len(self.entries)

    def variables(self):
        names = set()
        for row in self.entries:
            for entry in row:
                names |= entry.variables()
        return frozenset(names)


@dataclass(frozen=True)
class KernelMatrix(CoeffMatrix):
    """
    d x d matrix of functions of (t, theta), defined on its support.

    Attributes:
        support (tuple[float, float]): theta-interval (lo, hi) inside [-tau, 0].
    """

    support: Tuple[float, float] = (0.0, 0.0)

    @classmethod
    def parse(cls, rows, support=(0.0, 0.0), key_path=None) -> "KernelMatrix":
        """Build from nested lists of expression strings in ``t`` and ``theta``."""
        lo, hi = support
        return cls(_parse_rows(rows, ("t", "theta"), key_path), (float(lo), float(hi)))


@dataclass(frozen=True)
class DiscreteTerm:
    """B_k(t) x(t - delay)."""

    delay: float
    B: CoeffMatrix


@dataclass(frozen=True)
class KernelTerm:
    """Integral of C_k(t, theta) x(t + theta) over C_k.support."""

    C: KernelMatrix

    @property
    def support(self) -> Tuple[float, float]:
        return self.C.support


@dataclass(frozen=True)
class ProblemSpec:
    """
    A linear RFDE or RE with its delay structure.

    Attributes:
        kind (ProblemKind): RFDE or RE.
        dim (int): State dimension d.
        max_delay (float): tau > 0; histories live on [-tau, 0].
        A (CoeffMatrix | None): Instantaneous term (RFDE only).
        discrete (tuple[DiscreteTerm, ...]): Point delays (RFDE only), sorted after validation.
        kernels (tuple[KernelTerm, ...]): Distributed terms; the whole right-hand side of an RE.
        period (float | None): Coefficient period, if the problem is periodic.
        label (str): Free-form name used in reports.
        kernel_bound (float | None): Sampled bound gamma on the kernels, filled by validate.
    """

    kind: ProblemKind
    dim: int
    max_delay: float
    A: Optional[CoeffMatrix] = None
    discrete: Tuple[DiscreteTerm, ...] = ()
    kernels: Tuple[KernelTerm, ...] = ()
    period: Optional[float] = None
    label: str = ""
    kernel_bound: Optional[float] = field(default=None, compare=False)

    @property
    def delays(self) -> Tuple[float, ...]:
        return tuple(term.delay for term in self.discrete)

    def breakpoints(self) -> Tuple[float, ...]:
        """Offsets theta in [-tau, 0] where the right-hand side may be non-smooth."""
        points = {0.0, -self.max_delay}
        points.update(-delay for delay in self.delays)
        for term in self.kernels:
            points.update(term.support)
        return tuple(sorted(points))


@dataclass(frozen=True)
class SegmentQuery:
    """
    A point of the history segment x_t: x_t(theta) = x(t + theta).

    Attributes:
        base_time (float): t in [0, h].
        offset (float): theta in [-tau, 0].
    """

    base_time: float
    offset: float

    @property
    def point(self) -> float:
        return self.base_time + self.offset

    def check(self, max_delay: float, h: float) -> "SegmentQuery":
        """Raise ValueError unless t + theta lies in [-tau, h]."""
        tol = 1e-12 * max(1.0, max_delay, h)
        if not (-max_delay - tol <= self.point <= h + tol):
            raise ValueError(f"segment point {self.point} outside [{-max_delay}, {h}]")
        return self
