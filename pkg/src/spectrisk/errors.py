"""Exception hierarchy and warning categories shared across the package."""


class SpectriskError(Exception):
    """Base class for all spectrisk errors."""


class BadArgument(SpectriskError, ValueError):
    """An argument is outside the domain of the requested computation."""


class NegativeAtom(BadArgument):
    """A spectral atom (eigenvalue) is negative."""


class BadWeights(BadArgument):
    """Point-mass weights are non-positive or do not sum to one."""


class DepthTooLarge(BadArgument):
    """Binary-tree depth would produce a matrix beyond desk scale."""


class NonFiniteIntegrand(SpectriskError):
    """The integrand evaluated to NaN or infinity on the support."""


class InverseMomentInfinite(SpectriskError):
    """E[T^-1] is infinite (spectrum has mass at zero)."""


class NoConvergence(SpectriskError):
    """Fixed-point solver exhausted its iteration budget."""


class SingularDerivative(SpectriskError):
    """The derivative formula denominator is not positive (internal error)."""


class NotPositiveDefinite(SpectriskError):
    """An explicit covariance matrix is not symmetric positive definite."""


class SingularSolve(SpectriskError):
    """A linear solve failed (internal error for regularized systems)."""


class SingularSigma(SpectriskError):
    """The covariance matrix is numerically singular."""


class BadClassSizes(BadArgument):
    """Class sample sizes are inconsistent with the total sample size."""


class GridMismatch(SpectriskError):
    """Two tables do not share the same lambda grid."""


class SmallAtomWarning(UserWarning):
    """A spectral atom is close enough to zero that inverse moments are unreliable."""
