"""Exception hierarchy shared by every module."""


class DescentError(ValueError):
    """Base class for invalid-input conditions."""


class ZeroInput(DescentError):
    pass


class EvenModulus(DescentError):
    pass


class NonPositiveModulus(DescentError):
    pass


class NonResidue(DescentError):
    pass


class DegenerateSpace(DescentError):
    pass


class BudgetExceeded(DescentError):
    pass


class SingularCurve(DescentError):
    pass


class InvalidTwist(DescentError):
    pass


class InvalidInput(DescentError):
    pass


class BadModulus(DescentError):
    pass


class EmptyInput(DescentError):
    pass


class DuplicateCurve(DescentError):
    pass


class NotFound(DescentError):
    pass


class EngineDefect(RuntimeError):
    """An internal consistency check failed; never a legitimate answer."""


class DepthExceeded(EngineDefect):
    pass
