"""Exception hierarchy shared by the counting engines and the CLI."""


class TricountError(Exception):
    """Base class; ``exit_code`` is what the CLI returns for it."""

    exit_code = 4


class InvalidInput(TricountError, ValueError):
    exit_code = 2


class DegenerateTriangle(InvalidInput):
    pass


class NoTriangulation(InvalidInput):
    """All input points are collinear."""


class UndefinedBase(InvalidInput):
    """The n-th root of a zero count was requested."""


class CapacityExceeded(TricountError):
    exit_code = 3


class InvariantViolation(TricountError, AssertionError):
    exit_code = 4
