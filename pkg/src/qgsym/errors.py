"""Exception taxonomy for the toolkit.

Every error raised by the library derives from :class:`QgsymError`, so
callers (notably the CLI) can map the whole family onto exit codes.
Verification *failures* are not exceptions: verifiers return reports and
leave the judgement to the caller.  Exceptions mark inputs that are
malformed or outside an operation's contract.
"""


class QgsymError(Exception):
    """Base class for all toolkit errors."""


# -- graphs ------------------------------------------------------------------

class LoopRejected(QgsymError):
    """A self-loop {x, x} was supplied for a simple graph."""


class OutOfRange(QgsymError):
    """A vertex index lies outside 0..n-1."""


class SizeMismatch(QgsymError):
    """Two graphs that must share a vertex count do not."""


class TooLarge(QgsymError):
    """Input exceeds a brute-force bound."""


class TooSmall(QgsymError):
    """Input below the scope of an operation (e.g. certification needs n >= 3)."""


class NotAutomorphism(QgsymError):
    """A permutation does not preserve the adjacency relation."""


# -- linear algebra ----------------------------------------------------------

class NotSquare(QgsymError):
    """A square matrix was required."""


class NotOrderK(QgsymError):
    """A unitary was required to satisfy u**k = I and does not."""


# -- representations ---------------------------------------------------------

class DimensionMismatch(QgsymError):
    """Graph sizes and block-grid sizes are inconsistent."""


class NotUnitary(QgsymError):
    """A matrix required to be unitary is not (within tolerance)."""


class NotUnitModulus(QgsymError):
    """A scalar required to lie on the unit circle does not."""


class NotMagicUnitary(QgsymError):
    """A projection grid fails the magic-unitary row/column conditions."""


class RelationViolated(QgsymError):
    """A generator relation fails; carries the offending indices."""

    def __init__(self, message: str, indices=None, residual: float | None = None):
        super().__init__(message)
        self.indices = indices
        self.residual = residual


class PreconditionFailed(QgsymError):
    """An operation's verified-input precondition does not hold."""


class NotFlat(QgsymError):
    """A matrix required to be a flat (complex Hadamard) unitary is not."""


# -- witnesses / certification -----------------------------------------------

class IndexOutOfRange(QgsymError):
    """A witness word refers to vertex indices outside the representation."""


# -- CLI / file formats ------------------------------------------------------

class ParseError(QgsymError):
    """A file could not be parsed in any accepted format."""


class UnknownConstruction(QgsymError):
    """The build command received an unknown construction name."""


class BadParams(QgsymError):
    """The build command received invalid or missing parameters."""
