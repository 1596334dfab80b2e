"""Exception hierarchy.  Every error carries a stable ``code`` string."""


class UnitForceError(Exception):
    code = "Error"

    def __init__(self, message: str = ""):
        super().__init__(message or self.code)


class ZeroDenominator(UnitForceError, ZeroDivisionError):
    code = "ZeroDenominator"


class DimMismatch(UnitForceError, ValueError):
    code = "DimMismatch"


class RationalSyntax(UnitForceError, ValueError):
    code = "RationalSyntax"


class DegenerateMirror(UnitForceError, ValueError):
    code = "DegenerateMirror"


class IncongruentPairs(UnitForceError, ValueError):
    code = "IncongruentPairs"


class NegativeInput(UnitForceError, ValueError):
    code = "NegativeInput"


class TriangleInequality(UnitForceError, ValueError):
    code = "TriangleInequality"


class BadScale(UnitForceError, ValueError):
    code = "BadScale"


class BadParameter(UnitForceError, ValueError):
    code = "BadParameter"


class WrongDistance(UnitForceError, ValueError):
    code = "WrongDistance"


class DegenerateHalf(UnitForceError, ValueError):
    code = "DegenerateHalf"


class BadDistance(UnitForceError, ValueError):
    code = "BadDistance"


class BudgetExceeded(UnitForceError, RuntimeError):
    code = "BudgetExceeded"


class DegeneratePair(UnitForceError, ValueError):
    code = "DegeneratePair"


class ExprSyntax(UnitForceError, ValueError):
    code = "SyntaxError"

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class DomainError(UnitForceError, ValueError):
    code = "DomainError"


class NegativeDistance(UnitForceError, ValueError):
    code = "NegativeDistance"


class NoDerivation(UnitForceError, RuntimeError):
    code = "NoDerivation"


class NumericalError(UnitForceError, FloatingPointError):
    code = "NumericalError"
