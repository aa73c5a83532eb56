"""Exception hierarchy shared by every module of the package."""


class FracJumpError(Exception):
    """Base class for all domain errors raised by fracjump."""

    name = "fracjump-error"


class InvalidModulusError(FracJumpError, ValueError):
    name = "invalid-modulus"


class InvalidInputError(FracJumpError, ValueError):
    name = "invalid-input"


class IncompleteFactorizationError(FracJumpError):
    name = "incomplete-factorization"


class NotAUnitError(FracJumpError, ArithmeticError):
    """Raised when g**group_order != 1 for a claimed group element."""

    name = "not-a-unit-of-claimed-group"


class InternalContradictionError(FracJumpError, RuntimeError):
    """A mathematically guaranteed condition failed; indicates a bug or bad input."""

    name = "internal-contradiction"


class NotFoundError(FracJumpError, LookupError):
    name = "not-found"


class TransitivityError(FracJumpError, ValueError):
    name = "transitivity"


class FormatError(FracJumpError, ValueError):
    name = "format"


class TruncationError(FormatError):
    name = "truncation"


class RangeError(FormatError):
    name = "range"


class CorruptProgramError(FormatError):
    name = "corrupt-program"


class CapacityError(FracJumpError):
    name = "capacity"
