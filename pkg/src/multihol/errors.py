"""Exception hierarchy.

The CLI maps these onto exit codes: ``InputError`` -> 2,
``PreconditionError`` -> 3, ``BoundExceeded`` -> 4.
"""


class MultiholError(Exception):
    pass


class InputError(MultiholError, ValueError):
    """Malformed or inconsistent input data."""

    def __init__(self, message, field=None):
        super().__init__(f"{field}: {message}" if field else message)
        self.field = field


class SpecError(InputError):
    pass


class DimensionMismatch(InputError):
    pass


class ModulusMismatch(InputError):
    pass


class SpecMismatch(InputError):
    pass


class PreconditionError(MultiholError, ArithmeticError):
    """A mathematical precondition of an operation does not hold."""


class SingularMatrix(PreconditionError):
    pass


class Infeasible(PreconditionError):
    pass


class NotFullRank(PreconditionError):
    pass


class NotSymmetric(PreconditionError):
    pass


class NotAntiSymmetric(PreconditionError):
    pass


class TauSingular(PreconditionError):
    pass


class SingularInput(PreconditionError):
    pass


class SingularT(PreconditionError):
    pass


class HalfExcluded(PreconditionError):
    pass


class CriterionFails(PreconditionError):
    pass


class VerificationFailed(MultiholError, AssertionError):
    """A construction that must succeed did not verify (an implementation bug)."""


class BoundExceeded(MultiholError):
    """A brute-force computation would exceed its configured size cap."""
