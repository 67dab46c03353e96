"""Exception types shared across the package."""


class QspicbError(Exception):
    """Base class for all package-specific errors."""


class WeightMismatchError(QspicbError):
    """Operands live in different weight spaces."""


class GroupMismatchError(QspicbError):
    """A Hecke element was combined with data from another group."""


class UnregisteredModuleError(QspicbError):
    """A module handle was used outside the factory that built it."""


class HeightCapExceededError(QspicbError):
    """A weight-graded computation ran past the configured height cap."""


class EmptyBlockError(QspicbError):
    """A tensor shape declared a block with no positions."""


class ShapeError(QspicbError):
    """A block specification is inconsistent with its type sequence."""


class SingularGramError(QspicbError):
    """A Gram matrix expected to be invertible was singular."""


class InconsistentSystemError(QspicbError):
    """An overdetermined linear system had contradictory rows.

    Carries the tag of the first offending row so convention errors
    can be traced to the generator that produced the equation.
    """

    def __init__(self, message, tag=None):
        super().__init__(message)
        self.tag = tag


class UnderdeterminedSystemError(QspicbError):
    """A linear solve expected a unique solution but found a kernel."""


class InvolutivityError(QspicbError):
    """A constructed bar operator failed to square to the identity."""


class TriangularityError(QspicbError):
    """A matrix expected to be unitriangular was not."""


class GenerationError(QspicbError):
    """A transport closure stalled before spanning the module."""
