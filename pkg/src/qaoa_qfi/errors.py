"""Exception types raised by the library."""


class QaoaQfiError(Exception):
    pass


class InvalidInstanceError(QaoaQfiError, ValueError):
    """A graph that cannot be built for the requested size."""


class CapacityError(QaoaQfiError, ValueError):
    """Qubit count outside what the dense simulator supports."""


class ContractError(QaoaQfiError, ValueError):
    """Inputs violate an operation's preconditions (shape, range, config)."""


class DegenerateMatrixError(QaoaQfiError, ValueError):
    """Matrix trace too small to normalize by."""


class NumericError(QaoaQfiError, ArithmeticError):
    pass
