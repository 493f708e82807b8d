"""Exception types shared across the package."""


class MinsosError(Exception):
    """Base class for all package-specific errors."""


class ExponentOverflow(MinsosError):
    """A monomial exceeds the target bidegree during homogenization."""


class UnsupportedDegree(MinsosError):
    """Requested graded piece is not available (only k in {1, 2})."""


class NotAScroll(MinsosError):
    """Operation defined only for rational normal scrolls."""


class DegreeMismatch(MinsosError):
    """Bidegree or divisibility pattern of a biform is violated."""


class NotAQuadraticForm(MinsosError):
    """Form is not a quadratic form on the given surface."""


class DimensionMismatch(MinsosError):
    """Vector or matrix dimensions do not match the expected size."""


class NonSymmetric(MinsosError):
    """Matrix is not symmetric (or not real where required)."""


class NotInFiber(MinsosError):
    """Matrix does not satisfy m^T G m = f within tolerance."""


class RankTooLarge(MinsosError):
    """Requested rank bound admits no nontrivial minor system."""


class PathFailureBudgetExceeded(MinsosError):
    """More than the allowed fraction of homotopy paths failed."""

    def __init__(self, failed, total, message=None):
        self.failed = failed
        self.total = total
        super().__init__(
            message
            or "%d of %d paths failed without diverging; re-run with a new seed"
            % (failed, total)
        )


class OddDiagonalDegree(MinsosError):
    """A diagonal entry of a matrix polynomial has odd degree."""


class OffDiagonalDegreeMismatch(MinsosError):
    """Off-diagonal entry degree incompatible with the diagonal pattern."""


class IterationBudgetExceeded(MinsosError):
    """Alternating projections exhausted the iteration budget."""

    def __init__(self, iterations, gap, message=None):
        self.iterations = iterations
        self.gap = gap
        super().__init__(
            message
            or "no PSD fiber point found after %d iterations (final gap %.3e)"
            % (iterations, gap)
        )


class StuckAboveTarget(MinsosError):
    """Rank reduction found no usable direction above the target rank."""

    def __init__(self, achieved, target, message=None):
        self.achieved = achieved
        self.target = target
        super().__init__(
            message
            or "rank reduction stalled at rank %d (target %d)" % (achieved, target)
        )


class NotPSD(MinsosError):
    """Matrix polynomial is not positive semidefinite; carries a witness."""

    def __init__(self, witness=None, message=None):
        self.witness = witness
        super().__init__(message or "matrix polynomial is not PSD at %r" % (witness,))


class NotNonnegative(MinsosError):
    """Binary form takes negative values on the real line."""


class ApexCoefficientNotPositive(MinsosError):
    """Quadratic form on a cone has a nonpositive apex coefficient."""
