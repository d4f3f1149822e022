"""Exception hierarchy shared by every component.

Each error class carries the process exit status the command-line front end
reports for it: 2 for configuration and parse problems, 3 for numerical
failures, 4 for invariant checks that did not hold.
"""


class DelaySpectraError(Exception):
    """Base class for all errors raised on purpose by this package."""

    exit_code = 1


class ConfigError(DelaySpectraError):
    """A configuration document or argument is malformed.

    Attributes:
        key_path (str | None): Dotted path of the offending key, e.g. ``problem.max_delay``.
    """

    exit_code = 2

    def __init__(self, message, key_path=None):
        self.key_path = key_path
        if key_path:
            message = f"{key_path}: {message}"
        super().__init__(message)


class ExprSyntaxError(ConfigError):
    """A coefficient expression could not be parsed.

    Attributes:
        offset (int): Byte offset in the source string where parsing stopped.
        expected (frozenset[str]): Token kinds that would have been accepted there.
    """

    def __init__(self, message, offset, expected=frozenset(), key_path=None):
        self.reason = message
        self.offset = offset
        self.expected = frozenset(expected)
        detail = f"{message} at offset {offset}"
        if self.expected:
            detail += f" (expected one of: {', '.join(sorted(self.expected))})"
        super().__init__(detail, key_path)


class ValidationError(ConfigError):
    """A problem definition violates a structural rule."""


class NumericalError(DelaySpectraError):
    """A numerical step failed."""

    exit_code = 3


class ExprDomainError(NumericalError):
    """An expression was evaluated outside its domain (division by zero, sqrt of a negative)."""


class CoefficientError(NumericalError):
    """A coefficient entry could not be evaluated at a given time.

    Attributes:
        t (float): Time at which evaluation failed.
        entry (tuple[int, int]): Row and column of the failing entry.
    """

    def __init__(self, message, t, entry):
        self.t = t
        self.entry = entry
        super().__init__(f"coefficient entry {entry} at t={t!r}: {message}")


class SingularSystemError(NumericalError):
    """The matrix I - U2 is singular to working tolerance.

    Attributes:
        condition_estimate (float): 1-norm condition estimate of I - U2.
    """

    def __init__(self, message, condition_estimate):
        self.condition_estimate = condition_estimate
        super().__init__(f"{message} (condition estimate {condition_estimate:.3e})")


class EigenConvergenceError(NumericalError):
    """The dense eigensolver did not converge.

    Attributes:
        size (int): Dimension of the matrix.
    """

    def __init__(self, size):
        self.size = size
        super().__init__(f"eigenvalue iteration did not converge for a {size}x{size} matrix")


class IntegrationError(NumericalError):
    """Brute-force time integration overflowed.

    Attributes:
        steps (int): Number of steps that was requested.
    """

    def __init__(self, message, steps):
        self.steps = steps
        super().__init__(f"{message} (steps={steps})")


class TooFewPointsError(NumericalError):
    """Not enough usable rows to fit a convergence order."""


class ToleranceError(DelaySpectraError):
    """One or more invariants checked by the ``check`` command failed."""

    exit_code = 4


class NumericalWarning(UserWarning):
    """Warning category for conditioning and validation notices."""
