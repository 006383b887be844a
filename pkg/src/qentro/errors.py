"""Exception hierarchy shared by all qentro modules."""


class QentroError(Exception):
    """Base class for all library errors."""


class ParseError(QentroError):
    """Malformed or missing input data (JSON files, matrix encodings)."""


class NotHermitian(QentroError):
    """Matrix deviates from Hermitian symmetry beyond tolerance."""


class NotPositive(QentroError):
    """Operator has an eigenvalue below the negativity tolerance."""


class DimMismatch(QentroError):
    """Operand dimensions are incompatible."""


class ConvergenceFailure(QentroError):
    """Numerical routine (eigensolver, iteration) failed to converge."""


class DomainError(QentroError):
    """Scalar argument outside the function domain."""


class HypothesisViolated(QentroError):
    """Operands do not satisfy the hypotheses of an inequality checker."""


class NotContraction(QentroError):
    """Operator or Kraus set exceeds the contraction bound."""


class PovmIncomplete(QentroError):
    """POVM elements do not sum to the identity within tolerance."""


class BadDistribution(QentroError):
    """Probability weights are negative or do not sum to one."""


class EmptyInput(QentroError):
    """An operation received an empty collection."""


class BasisNotOrthonormal(QentroError):
    """Supplied vectors are not an orthonormal basis within tolerance."""


class UnsupportedLaw(QentroError):
    """Analytic family law outside the supported catalog."""


class ScaleExceeded(QentroError):
    """Problem size above the supported desk-scale limits."""


class SupportDegenerate(QentroError):
    """A state escapes the support of every candidate center."""


class InfeasibleConstraint(QentroError):
    """No ensemble can satisfy the requested constraint."""


class VanishingOutput(QentroError):
    """Operation output has numerically zero trace."""
