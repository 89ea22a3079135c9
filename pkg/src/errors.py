"""Error hierarchy shared by the algebra core, the verification suite and the CLI."""

from typing import Iterable, Optional


class SuperloopError(ValueError):
    """Base class for every error raised by superloop."""


class OutOfScopeError(SuperloopError):
    """Input lies outside the supported algebras, ideals or ground field."""


class DimensionMismatchError(SuperloopError):
    """Vector, matrix or module dimensions do not agree."""


class NotDominantError(SuperloopError):
    """A highest weight fails the dominant-integral test."""


class NotCyclicError(SuperloopError):
    """The chosen vector does not generate the whole module."""

    def __init__(self, message: str, deficient: Optional[Iterable] = None):
        super().__init__(message)
        self.deficient = list(deficient or [])


class WindowTooSmallError(SuperloopError):
    """A graded closure escaped the requested degree window."""


class CyclotomicExtensionError(SuperloopError):
    """The period needs a primitive root of unity that is not rational."""


class PermutationBoundError(SuperloopError):
    """Permutation search requested beyond the supported number of points."""


class SpecFileError(SuperloopError):
    """A JSON spec file violates the v1 schema."""


class ExtractionError(SuperloopError):
    """Highest-weight data could not be read back from a module."""


class MixedParityError(SuperloopError):
    """A superbracket was requested on an element that is not homogeneous."""
