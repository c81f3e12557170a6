"""Exception types raised across the package.

Every domain error derives from :class:`QudiscError` so callers (and the
service layer) can distinguish "you asked for something invalid" from a
genuine bug.  Config/spec problems are grouped under
:class:`ConfigurationError`; the service maps those to 4xx responses and
the CLI maps them to exit code 1, everything else to exit code 2.
"""


class QudiscError(Exception):
    """Base class for all errors raised by this package."""


class ConfigurationError(QudiscError):
    """Base class for errors caused by invalid user-supplied specs/configs."""


class NonSquareError(QudiscError):
    """A matrix that must be square is not."""


class NotUnitaryError(QudiscError):
    """A matrix that must be unitary fails the unitarity check."""


class NoConvergenceError(QudiscError):
    """The eigenroutine did not reach the requested residual tolerance."""


class DimensionMismatchError(QudiscError):
    """Two operands have incompatible dimensions."""


class NoZeroInHullError(QudiscError):
    """The eigenvalue hull does not contain the origin (arc below pi)."""


class TooManyQubitsError(QudiscError):
    """A statevector operation exceeds the supported qubit count."""


class UnsupportedGateError(QudiscError):
    """A gate kind cannot be handled in the requested context."""


class CorrectionNotFoundError(QudiscError):
    """No X-layer subset maps the prepared state onto the requested target."""


class InvalidSpecError(ConfigurationError):
    """A scheme specification violates its invariants."""


class InvalidConfigError(ConfigurationError):
    """An experiment configuration violates its invariants."""


class LengthMismatchError(QudiscError):
    """A bitstring's length does not match the rule it is classified under."""


class EmptyInputError(QudiscError):
    """An aggregate operation received no elements."""


class ShotMismatchError(QudiscError):
    """Two count tables that must have equal totals do not."""
