"""Exception types shared across the package.

The numerical routines distinguish three failure flavours: bad inputs
(DomainError), iterations or quadratures that did not reach their target
(ConvergenceError and subclasses), and results that are formally finite but
numerically meaningless (AccuracyLossError).  CLI code maps DomainError and
config problems to exit code 2 and everything else here to exit code 3.
"""


class FracdiskError(Exception):
    """Base class for all package-specific errors."""


class DomainError(FracdiskError, ValueError):
    """Arguments outside the mathematical domain of an operation."""


class ConvergenceError(FracdiskError, RuntimeError):
    """A series, quadrature, or iteration failed to meet its tolerance."""


class AccuracyLossError(ConvergenceError):
    """Cancellation destroyed too many digits for the result to be trusted.

    Attributes
    ----------
    ratio : float
        Observed max |term| / |sum| cancellation ratio.
    budget : float
        The configured budget that was exceeded.
    """

    def __init__(self, message, ratio=None, budget=None):
        super().__init__(message)
        self.ratio = ratio
        self.budget = budget


class InversionError(ConvergenceError):
    """Numerical Laplace inversion produced an unstable result."""


class HorizonError(FracdiskError, RuntimeError):
    """A sampled path or time grid does not reach the requested time."""


class CoverageError(FracdiskError, LookupError):
    """A precomputed kernel table does not cover the requested mode or time."""


class AcceptanceRateError(FracdiskError, RuntimeError):
    """A rejection sampler's acceptance rate fell below its safe threshold."""


class InvariantError(FracdiskError, RuntimeError):
    """A structural invariant check failed (monotonicity, bounds, ...)."""


class StepSizeError(ConvergenceError):
    """A finite-difference step failed its self-consistency (Richardson) check."""
