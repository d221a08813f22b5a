"""Exception hierarchy shared by the solver modules."""


class KGWoodsError(Exception):
    """Base class for every error raised by this package."""


class NumericsError(KGWoodsError, ArithmeticError):
    pass


class PoleError(NumericsError):
    """A gamma function (or a hypergeometric ``c``) sits on a pole."""

    def __init__(self, message, argument=None):
        super().__init__(message)
        self.argument = argument


class ConvergenceError(NumericsError):
    pass


class DegenerateParamsError(NumericsError):
    """A connection formula would need its logarithmic limit case."""


class BranchCutError(NumericsError):
    pass


class DomainError(KGWoodsError, ValueError):
    pass


class MatchingPointError(DomainError):
    pass


class ResonanceDenominatorError(NumericsError):
    pass


class ComplexResidualError(NumericsError):
    pass


class NoBracketError(KGWoodsError):
    pass


class NonConvergedRootError(KGWoodsError):
    def __init__(self, message, bracket=None, last=None):
        super().__init__(message)
        self.bracket = bracket
        self.last = last


class StepSizeError(KGWoodsError, ValueError):
    pass


class ConfigError(KGWoodsError, ValueError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
