"""Exception hierarchy shared by the library and the CLI."""


class AtomDeconvError(Exception):
    """Base class for every error raised by atom-deconv."""

    exit_code: int = 1


class ParameterError(AtomDeconvError):
    """Raised when an input violates a documented precondition."""

    exit_code = 2


class NumericalError(AtomDeconvError):
    """Raised when a computation cannot deliver a trustworthy number."""

    exit_code = 3


class InvalidParameter(ParameterError):
    """Raised when a scalar parameter is outside its admissible range."""


class InvalidSpecString(ParameterError):
    """Raised when a kernel, noise or grid identifier cannot be parsed."""


class KernelKindMismatch(ParameterError):
    """Raised when a kernel is validated against the wrong set of conditions."""


class IntegralNotTwo(ParameterError):
    """Raised when an atom kernel's transform does not integrate to two."""


class RatioUnbounded(ParameterError):
    """Raised when a kernel ratio blows up near the origin."""


class NotOneAtZero(ParameterError):
    """Raised when a density kernel's transform is not one at the origin."""


class CfNotOneAtZero(ParameterError):
    """Raised when a characteristic function is not one at the origin."""


class CfNotHermitian(ParameterError):
    """Raised when cf(-t) differs from the conjugate of cf(t)."""


class InvalidSample(ParameterError):
    """Raised when observations are empty, non-finite or unparsable."""


class DegenerateSplit(ParameterError):
    """Raised when sample splitting is requested for fewer than two points."""


class LengthMismatch(ParameterError):
    """Raised when a grid and its values differ in length."""


class GridTooNarrow(ParameterError):
    """Raised when an evaluation grid misses too much target mass."""


class InsufficientRows(ParameterError):
    """Raised when a rate fit has fewer rows than it needs."""


class NoiseCfUnderflow(NumericalError):
    """Raised when the noise characteristic function underflows at a node."""


class QuadratureNotConverged(NumericalError):
    """Raised when two quadrature refinements disagree beyond tolerance."""


class NonFiniteIntegrand(NumericalError):
    """Raised when an integrand produces NaN or infinite values."""


class ZeroMass(NumericalError):
    """Raised when a clipped density has no mass left to renormalize."""


class NonPositiveRisk(NumericalError):
    """Raised when a log-scale rate fit meets a non-positive risk."""


class DensityNonPositive(NumericalError):
    """Raised when an inverted observation density is not strictly positive."""
