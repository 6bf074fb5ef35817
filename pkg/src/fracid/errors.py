"""Exception types raised by fracid.

Every error carries its class name as a stable prefix when reported by the
command-line front end, so scripts can grep for e.g. ``SingularNormalMatrix:``.
"""


class FracIdError(Exception):
    """Base class for all fracid errors."""


class InvalidSeries(FracIdError, ValueError):
    pass


class InvalidModel(FracIdError, ValueError):
    pass


class InvalidMemory(FracIdError, ValueError):
    pass


class DegenerateDenominator(FracIdError, ArithmeticError):
    """The leading coefficient of the explicit recursion vanishes for this step size."""


class ZeroA0(FracIdError, ZeroDivisionError):
    pass


class LengthMismatch(FracIdError, ValueError):
    pass


class SingularNormalMatrix(FracIdError, ArithmeticError):
    """Normal equations are rank deficient (flat output, or alpha == beta)."""


class InvalidConfig(FracIdError, ValueError):
    pass


class NoFeasibleCandidate(FracIdError, RuntimeError):
    pass


class ParseError(FracIdError, ValueError):
    def __init__(self, path, lineno, token, reason="not a number"):
        self.path = path
        self.lineno = lineno
        self.token = token
        super().__init__(f"{path}:{lineno}: {reason}: {token!r}")


class NonUniformGrid(FracIdError, ValueError):
    pass


class TooShort(FracIdError, ValueError):
    pass
