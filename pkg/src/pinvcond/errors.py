"""Exception and warning types shared across the package."""


class DimensionError(ValueError):
    """Matrix or vector shapes are incompatible with the requested operation."""


class DomainError(ValueError):
    """A scalar parameter lies outside the domain where a formula is valid."""


class HypothesisViolationError(ValueError):
    """Inputs violate the hypothesis under which an inequality is stated,
    so evaluating it would produce a number with no guarantee attached."""


class RankDeficiencyError(ArithmeticError):
    """Smallest singular value is numerically zero, so the condition number
    and pseudo-inverse are not defined.

    Carries ``sigma_min`` and ``sigma_max`` so callers can report how close
    the matrix was to the rank boundary.
    """

    def __init__(self, sigma_min: float, sigma_max: float, tol: float):
        self.sigma_min = float(sigma_min)
        self.sigma_max = float(sigma_max)
        self.tol = float(tol)
        super().__init__(
            f"matrix is numerically rank deficient: sigma_min={sigma_min:.6e}, "
            f"sigma_max={sigma_max:.6e}, threshold={tol:.6e}"
        )


class SvdConvergenceError(RuntimeError):
    """Bidiagonal QR iteration did not deflate every off-diagonal entry."""

    def __init__(self, sweeps: int):
        self.sweeps = int(sweeps)
        super().__init__(f"singular value iteration failed to converge after {sweeps} sweeps")


class DegenerateSpanError(ValueError):
    """Rows do not span a subspace of the expected dimension, so an
    orthonormal complement cannot be attached."""


class IndefiniteMatrixError(ArithmeticError):
    """A direction of nonpositive curvature p'Pp <= 0 showed up, so the
    matrix is not positive definite and the iteration cannot proceed."""


class ConfigError(ValueError):
    """Invalid run configuration (bad flag value, missing file, ...)."""


class MultiplicityWarning(UserWarning):
    """The extreme singular value is numerically repeated; the reported
    direction is one representative of a multi-dimensional family."""


class HeavyTailWarning(UserWarning):
    """A small fraction of trials dominates a Monte Carlo average, so the
    reported mean is unstable at this sample size."""


class ExtrapolationWarning(UserWarning):
    """Formula evaluated at the boundary of its stated domain by continuity."""
