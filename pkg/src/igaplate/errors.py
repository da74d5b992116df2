"""Shared exception types."""


class GeometryError(RuntimeError):
    """Invalid or degenerate geometry (non-positive Jacobian, bad patch data)."""


class ConvergenceError(RuntimeError):
    """An iterative process failed to reach its tolerance."""


class SolverError(RuntimeError):
    """A linear or nonlinear solve failed (singular system, no eigenvalue)."""


class CaseError(ValueError):
    """A case description is malformed or inconsistent."""
