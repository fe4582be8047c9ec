"""Exception types shared across the package.

Every error carries a machine-readable ``code`` (the class name) which the
CLI surfaces in its JSON output.
"""


class SympdError(Exception):
    """Base class for all package errors."""

    @property
    def code(self) -> str:
        return type(self).__name__


class PointOutsideDisk(SympdError):
    """A point violates the closed unit disk constraint."""


class IntegratorDiverged(SympdError):
    """Area-preservation defect exceeded 10x tolerance; step size too large."""


class RefinementLimitExceeded(SympdError):
    """Angle unwinding could not reach sub-quarter-turn steps after 12 doublings."""


class BoundaryNotPreserved(SympdError):
    """A boundary sample left the unit circle beyond tolerance."""


class MonotonicityViolation(SympdError):
    """Sampled circle lift is not strictly increasing; undersampled lift."""


class CollisionDetected(SympdError):
    """Two strands of a configuration came closer than the separation floor."""


class ProjectionDegenerate(SympdError):
    """Crossing detection failed for every retried projection axis."""


class StrandMismatch(SympdError):
    """Braid operands have different strand counts."""


class NotPure(SympdError):
    """Operation requires a pure braid (identity permutation)."""


class NotCompactlySupported(SympdError):
    """Flow is not generated by a Hamiltonian vanishing near the boundary."""


class ExcessiveRejection(SympdError):
    """More than 10% of Monte Carlo configuration draws were rejected."""
