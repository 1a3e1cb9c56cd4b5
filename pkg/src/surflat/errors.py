"""Typed errors raised across the package.

Everything derives from SurflatError so callers (and the CLI) can catch
input/model problems uniformly.
"""


class SurflatError(Exception):
    """Base class for all package errors."""


class DimensionMismatchError(SurflatError):
    """A vector or matrix has the wrong rank for the lattice at hand."""


class SingularSystemError(SurflatError):
    """An exact linear solve hit a singular (sub)system."""


class NotNegativeDefiniteError(SurflatError):
    """A curve configuration required to be negative definite is not."""


class InconsistentIncidenceError(SurflatError):
    """Declared point multiplicities would force an impossible intersection."""


class InvariantViolationError(SurflatError):
    """A model fails one of its structural invariants."""


class UnknownNameError(SurflatError):
    """A curve or scene name does not resolve."""


class NoZariskiDecompositionError(SurflatError):
    """No Zariski decomposition exists within the tracked curves."""


class NotRedundantError(SurflatError):
    """The point fails the redundancy inequality mult(N + boundary) >= 1."""


class SceneFormatError(SurflatError):
    """A scene or graph file violates the serialization format."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
