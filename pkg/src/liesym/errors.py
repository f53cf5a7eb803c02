"""Exception hierarchy shared by all liesym modules."""


class LiesymError(Exception):
    """Base class for every error raised by this package."""


class ParseError(LiesymError):
    """Syntax error in an expression or problem file; carries a position."""

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at offset {position})"
        super().__init__(message)
        self.position = position


class UndeclaredIdentifierError(ParseError):
    """Identifier not declared in the active context."""


class DerivativeOrderError(LiesymError):
    """Derivative coordinate of order above 2 was requested."""


class UnsupportedExpressionError(LiesymError):
    """Expression falls outside the supported trig-polynomial class."""


class SubstitutionError(LiesymError):
    """Invalid binding passed to substitute()."""


class CyclicBindingError(SubstitutionError):
    """Binding map contains a dependency cycle."""


class ZeroDenominatorError(LiesymError):
    """Normalization produced an identically-zero denominator."""


class NotPolynomialError(LiesymError):
    """collect() target is not polynomial in a requested key atom."""


class SingularMetricError(LiesymError):
    """Metric determinant is identically zero."""


class NotExactSymmetryError(LiesymError):
    """Auxiliary-function seed does not annihilate the unperturbed system."""


class NonlinearAnsatzError(LiesymError):
    """Ansatz substitution left a constraint nonlinear in the unknown constants."""


class ProblemFileError(LiesymError):
    """Invalid problem-definition file."""
