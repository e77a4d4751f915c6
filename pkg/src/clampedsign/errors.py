"""Exception hierarchy shared by all solver modules."""


class ClampedSignError(Exception):
    """Base class for every error raised by the package."""


class InvalidInput(ClampedSignError, ValueError):
    """Arguments violate a documented precondition."""


class OutOfRange(InvalidInput):
    """A parameter lies outside the range where a construction is valid."""


class DegenerateInput(InvalidInput):
    """Input is valid in form but carries no information (e.g. u == 0)."""


class NumericalFailure(ClampedSignError, ArithmeticError):
    """Base class for failures of a numerical procedure."""


class NumericalGuard(NumericalFailure):
    """An internal consistency check tripped (should be unreachable)."""


class SingularSystem(NumericalFailure):
    """Linear system is singular to working precision."""


class NoConvergence(NumericalFailure):
    """An iteration exhausted its budget."""


class PositivityFailure(NumericalFailure):
    """A principal eigenvector iterate changed sign in the interior."""


class BracketFailure(NumericalFailure):
    """No convergent parameter value could be located."""
