"""fraclode: solver for D^alpha x(t) = A x(t), x(t0) = x0, alpha in (0, 1].

The order is represented as an odd-over-odd rational (2p+1)/(2q+1), which
keeps the solution real through odd roots of negative eigenvalues.  Two
numerical backends (rectangle rule and regularized adaptive Simpson) share
a matrix-exponential solution formula; a Mittag-Leffler series serves as
the independent scalar oracle.
"""

from .analysis import (
    ResidualReport,
    StabilityVerdict,
    StudyRow,
    Verdict,
    convergence_study,
    gl_derivative,
    gl_weights,
    residual_nev,
    stability_verdict,
)
from .errors import (
    ClusteredSpectrumError,
    ComplexSpectrumError,
    DomainError,
    FraclodeError,
    NonConvergenceError,
    NonUniformGridError,
    NoRepresentationError,
    OrderDomainError,
    OverflowError_,
    PoleError,
    QuadratureFailureError,
    SingularEigenvectorsError,
    SingularMatrixError,
    ZeroEigenvalueError,
)
from .linalg import (
    SpectralDecomposition,
    eig_real_simple,
    expm,
    frac_power,
    inverse,
    perturb_to_simple,
)
from .rational_order import FractionalOrder, approximate_order
from .solver import (
    CauchyProblem,
    Quadrature,
    SolveConfig,
    SumRange,
    Trajectory,
    classical_exponential,
    scalar_closed_form,
    solve_limit_perturbation,
    solve_matrix,
    solve_scalar_quad,
    solve_scalar_rect,
    solve_via_spectral,
)
from .specfun import MLParams, gfact, mittag_leffler, rpow

__version__ = "0.1.0"

__all__ = [
    "CauchyProblem",
    "ClusteredSpectrumError",
    "ComplexSpectrumError",
    "DomainError",
    "FraclodeError",
    "FractionalOrder",
    "MLParams",
    "NonConvergenceError",
    "NonUniformGridError",
    "NoRepresentationError",
    "OrderDomainError",
    "OverflowError_",
    "PoleError",
    "Quadrature",
    "QuadratureFailureError",
    "ResidualReport",
    "SingularEigenvectorsError",
    "SingularMatrixError",
    "SolveConfig",
    "SpectralDecomposition",
    "StabilityVerdict",
    "StudyRow",
    "SumRange",
    "Trajectory",
    "Verdict",
    "ZeroEigenvalueError",
    "approximate_order",
    "classical_exponential",
    "convergence_study",
    "eig_real_simple",
    "expm",
    "frac_power",
    "gfact",
    "gl_derivative",
    "gl_weights",
    "inverse",
    "mittag_leffler",
    "perturb_to_simple",
    "residual_nev",
    "rpow",
    "scalar_closed_form",
    "solve_limit_perturbation",
    "solve_matrix",
    "solve_scalar_quad",
    "solve_scalar_rect",
    "solve_via_spectral",
    "stability_verdict",
]
