"""Exception types shared across the package."""


class BilliardError(Exception):
    """Base class for all errors raised by this package."""


class DegenerateGeometryError(BilliardError):
    """Collinear points, zero normals, zero-volume tetrahedra and similar."""


class OffPlaneError(BilliardError):
    """A point expected to lie in a plane does not (beyond tolerance)."""


class ParallelLinesError(BilliardError):
    """Two lines are parallel where skew lines were required."""


class IntersectingLinesError(BilliardError):
    """Two lines intersect where skew lines were required."""


class IdentityRotationError(BilliardError):
    """A composed reflection product has no unique fixed axis."""


class StartSystemDegenerateError(BilliardError):
    """The start-point system is rank deficient.

    The collinearity system for a 4-cycle start point always has a unique
    solution or none; a rank-deficient system would mean a whole line of
    closed trajectories, which cannot happen. If this fires, it indicates
    a bug (or broken input), never a legitimate outcome.
    """


class UnclassifiableScanError(BilliardError):
    """A height scan found more than one existence interval."""

    def __init__(self, message, samples=None):
        super().__init__(message)
        self.samples = samples or []


class OverlayError(BilliardError):
    """The base triangle does not admit the overlay construction."""


class NotCornerPyramidError(BilliardError):
    """The tetrahedron has no vertex with three mutually orthogonal edges."""


class NotSymmetricError(BilliardError):
    """The tetrahedron is not mirror symmetric in the required sense."""


class UsageError(BilliardError):
    """Bad command-line arguments or malformed input files."""
