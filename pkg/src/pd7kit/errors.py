"""Exception hierarchy shared by all pd7kit modules.

Every domain error derives from :class:`PD7Error` so that the command line
front end can map them to exit code 1 in one place.
"""


class PD7Error(Exception):
    """Base class for all domain errors raised by pd7kit."""


# exact arithmetic
class NonExactDivision(PD7Error, ArithmeticError):
    """Raised when a Laurent polynomial division leaves a remainder."""


class PoleAtZero(PD7Error, ZeroDivisionError):
    """Evaluation of negative powers at zeta = 0."""


# evaluation of the algebraic solutions
class PoleHit(PD7Error):
    """The evaluation point is (numerically) a pole of u_n."""


class ZeroHit(PD7Error):
    """The evaluation point is (numerically) a zero of u_n."""


class BranchAmbiguity(PD7Error):
    """Continuation of a cubic root met a root collision."""


# spectral curve
class RootCollision(PD7Error):
    """Two roots of the spectral cubic coincide within tolerance."""


class OnCut(PD7Error):
    """A point lies on a branch cut where only boundary values exist."""


class AtOrigin(PD7Error):
    """A function with a singularity at eta = 0 was evaluated there."""


class QuadratureFailure(PD7Error):
    """Adaptive quadrature did not meet its tolerance."""


class BracketFailure(PD7Error):
    """No sign change could be bracketed."""


class BoundaryHit(PD7Error):
    """Continuation left the region where the roots stay distinct."""


class ContinuationStall(PD7Error):
    """Continuation step size fell below its floor for another reason."""


class RealityViolation(PD7Error):
    """A quantity that must be real has a significant real/imaginary part."""


# level set tracing
class TraceStall(PD7Error):
    """A trajectory step fell below its floor."""


class StructureViolation(PD7Error):
    """Traced trajectories do not have the expected endpoint structure."""


class PathConstructionFailure(PD7Error):
    """No admissible integration path could be built."""


# verification
class IdentityViolation(PD7Error):
    """An algebraic identity failed; ``which`` names it."""

    def __init__(self, which, value):
        super().__init__(f"identity {which!r} violated (deviation {value:.3e})")
        self.which = which
        self.value = value


class InsufficientData(PD7Error):
    """Too few data points for a fit."""
