"""Exception hierarchy shared by all modules."""


class HankelError(Exception):
    """Base class for errors raised by hankelcomp."""


class ShapeError(HankelError, ValueError):
    """Array lengths or Hankel dimensions are inconsistent."""


class PreconditionError(HankelError, ValueError):
    """A mathematical precondition of an operation does not hold."""


class InvalidModelError(HankelError, ValueError):
    """An exponential model violates its invariants (zero or repeated roots)."""


class DegenerateModelError(HankelError, ArithmeticError):
    """The estimated recurrence has a numerically zero leading coefficient."""


class NumericalOverflowError(HankelError, OverflowError):
    """A computation would leave the range of double precision."""


class DatasetMissingError(HankelError, FileNotFoundError):
    """A dataset file required by an experiment is not present."""


class ParseError(HankelError, ValueError):
    """An input file could not be parsed."""
