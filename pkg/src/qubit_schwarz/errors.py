"""Exception hierarchy shared by every module of the package."""


class QubitSchwarzError(Exception):
    """Base class for all errors raised by this package."""


class NonFiniteInput(QubitSchwarzError, ValueError):
    pass


class NonHermitianInput(QubitSchwarzError, ValueError):
    pass


class ConvergenceFailure(QubitSchwarzError, ArithmeticError):
    pass


class UnsupportedForm(QubitSchwarzError, TypeError):
    """A closed-form criterion was requested for a generator it does not cover."""


class InvalidSamplingPlan(QubitSchwarzError, ValueError):
    pass


class InvalidAlpha(QubitSchwarzError, ValueError):
    pass


class PreconditionViolated(QubitSchwarzError, ValueError):
    pass


class NotUnital(QubitSchwarzError, ValueError):
    pass


class DomainError(QubitSchwarzError, ValueError):
    pass


class NegativeTime(QubitSchwarzError, ValueError):
    pass
