"""Exception types shared across the package."""


class GdwellError(Exception):
    """Base class for all package-specific errors."""


class ConvergenceDomainError(GdwellError):
    """Parameters outside the domain where the iteration is defined (mixing
    coefficient not positive, i.e. g*a <= sqrt(1+a))."""


class GridError(GdwellError):
    """Malformed computational grid (x=1 not a node, too few points, ...)."""


class GridMismatchError(GdwellError):
    """Sampled values do not match the quadrature rule's grid."""


class OverflowGuardError(GdwellError):
    """A folded log-ratio exponent exceeded the safety bound (+30); the grid
    or truncation point is misconfigured."""


class DegenerateDenominatorError(GdwellError):
    """The normalization integral of the energy functional is not positive;
    signals corrupted iteration state upstream."""


class PositivityLossError(GdwellError):
    """An iterate f_n dropped to <= 0 somewhere; the iteration left its
    validity domain and must not be continued."""


class DiscretizationError(GdwellError):
    """The two-resolution eigenvalue estimates of the reference solver differ
    by more than the allowed bound."""


class BracketError(GdwellError):
    """A bisection bracket does not enclose a sign change."""


class NonConvergenceWarning(UserWarning):
    """The iteration hit max_iter before reaching the energy tolerance."""


class OutsideRegionWarning(UserWarning):
    """Parameters violate the monotone-convergence region (a <= critical
    shape value); the iteration may still run but convergence is not
    guaranteed."""
