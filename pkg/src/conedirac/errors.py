"""Exception hierarchy shared by all modules.

The CLI maps ``InvalidInput`` to exit code 2 and ``NumericalFailure``
(and its subclasses) to exit code 3.
"""


class ConeDiracError(Exception):
    pass


class InvalidInput(ConeDiracError, ValueError):
    """Parameters outside the admissible set (e.g. omega = pi/2)."""


class NumericalFailure(ConeDiracError, ArithmeticError):
    pass


class PoleError(NumericalFailure):
    """Special function evaluated at a pole."""


class ConvergenceError(NumericalFailure):
    """Series or iteration exceeded its cap."""


class SimplicityViolation(NumericalFailure):
    """Two branches produced the same root (the spectrum should be simple)."""


class StepUnderflow(NumericalFailure):
    """Adaptive integrator step size collapsed."""


class SpecialOverflow(NumericalFailure, OverflowError):
    """Result not representable in double precision."""
