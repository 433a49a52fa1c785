"""Error taxonomy shared by all fraclode modules.

Class names double as the stable "variant" identifiers reported by the
CLI, so renaming one is a breaking change.
"""


class FraclodeError(Exception):
    """Base class for all package errors."""


class NoRepresentationError(FraclodeError):
    """No odd-over-odd rational within tolerance up to the denominator bound."""


class PoleError(FraclodeError):
    """Generalized factorial requested at a pole of the gamma function."""


class DomainError(FraclodeError):
    """Argument outside the documented accuracy domain."""


class NonConvergenceError(FraclodeError):
    """Iteration budget exhausted before the tolerance was met."""


class ComplexSpectrumError(FraclodeError):
    """Matrix has eigenvalues with non-negligible imaginary parts."""


class ClusteredSpectrumError(FraclodeError):
    """Minimum eigenvalue gap below the separation tolerance."""


class SingularEigenvectorsError(FraclodeError):
    """Eigenvector matrix numerically singular or too ill-conditioned."""


class SingularMatrixError(FraclodeError):
    """Matrix inversion detected rank deficiency."""


class ZeroEigenvalueError(FraclodeError):
    """Negative fractional power requested for a (near-)zero eigenvalue."""


class OverflowError_(FraclodeError):
    """Result entries exceeded floating-point range."""


class OrderDomainError(FraclodeError):
    """Fractional-order parameters outside the representable domain."""


class QuadratureFailureError(FraclodeError):
    """Adaptive quadrature exceeded its refinement depth bound."""


class NonUniformGridError(FraclodeError):
    """Operation requires a uniform time grid."""
