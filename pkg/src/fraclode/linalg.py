"""Dense real small-matrix kernels.

Everything here operates on plain numpy arrays (square, finite, real).
Eigendecomposition is restricted to the distinct-real-spectrum case; any
complex or clustered spectrum is an error, never a silent complex path.
Matrices with repeated real eigenvalues are handled upstream through the
eps-perturbation ladder.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import (
    ClusteredSpectrumError,
    ComplexSpectrumError,
    DomainError,
    OverflowError_,
    SingularEigenvectorsError,
    SingularMatrixError,
    ZeroEigenvalueError,
)
from .specfun import rpow

#: Relative imaginary-part tolerance separating "real" from complex spectra.
IMAG_TOL_SCALE = 1e-9
#: Acceptance bound for T * T^{-1} - I and the reconstruction residual.
RECON_TOL = 1e-8


def as_matrix(a) -> np.ndarray:
    """Validate and return a square, finite, float matrix."""
    m = np.asarray(a, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {m.shape}")
    if not np.isfinite(m).all():
        raise DomainError("matrix entries must be finite")
    return m


def max_abs(a) -> float:
    return float(np.max(np.abs(a))) if np.size(a) else 0.0


def default_gap_tol(A) -> float:
    return 1e-8 * (1.0 + max_abs(A))


@dataclass
class SpectralDecomposition:
    """A = T diag(lambdas) T^{-1} with pairwise-distinct real eigenvalues."""

    T: np.ndarray
    lambdas: np.ndarray
    T_inv: np.ndarray
    recon_error: float

    @property
    def n(self) -> int:
        return len(self.lambdas)


def eig_real_simple(A, gap_tol: float | None = None) -> SpectralDecomposition:
    """Eigendecomposition for matrices with distinct real eigenvalues.

    Eigenvalues come back sorted ascending; eigenvector columns are
    normalized with a fixed sign convention so results are reproducible.
    """
    A = as_matrix(A)
    if gap_tol is None:
        gap_tol = default_gap_tol(A)
    if gap_tol <= 0.0:
        raise DomainError(f"gap_tol must be positive, got {gap_tol}")
    scale = 1.0 + max_abs(A)

    w, V = np.linalg.eig(A)
    if np.max(np.abs(w.imag)) > IMAG_TOL_SCALE * scale:
        raise ComplexSpectrumError(
            f"eigenvalues have imaginary parts up to {np.max(np.abs(w.imag)):.3e}"
        )
    w = w.real.copy()
    V = V.real.copy()

    idx = np.argsort(w, kind="stable")
    w = w[idx]
    V = V[:, idx]
    if len(w) > 1 and np.min(np.diff(w)) <= gap_tol:
        raise ClusteredSpectrumError(
            f"minimum eigenvalue gap {np.min(np.diff(w)):.3e} <= gap_tol {gap_tol:.3e}"
        )

    # Deterministic column scaling: unit norm, largest-|.| entry positive.
    for j in range(V.shape[1]):
        col = V[:, j]
        nrm = np.linalg.norm(col)
        if nrm == 0.0:
            raise SingularEigenvectorsError(f"zero eigenvector column {j}")
        col /= nrm
        if col[np.argmax(np.abs(col))] < 0.0:
            col *= -1.0

    try:
        V_inv = np.linalg.inv(V)
    except np.linalg.LinAlgError as exc:
        raise SingularEigenvectorsError("eigenvector matrix is singular") from exc
    ident_err = max_abs(V @ V_inv - np.eye(len(w)))
    if ident_err > RECON_TOL:
        raise SingularEigenvectorsError(
            f"||T T^-1 - I||_max = {ident_err:.3e} exceeds {RECON_TOL}"
        )
    recon = max_abs(V @ np.diag(w) @ V_inv - A)
    if recon > RECON_TOL * scale:
        raise SingularEigenvectorsError(
            f"reconstruction residual {recon:.3e} exceeds {RECON_TOL * scale:.3e}"
        )
    return SpectralDecomposition(T=V, lambdas=w, T_inv=V_inv, recon_error=recon)


def inverse(A) -> np.ndarray:
    """Matrix inverse with an explicit residual check."""
    A = as_matrix(A)
    try:
        Ainv = np.linalg.inv(A)
    except np.linalg.LinAlgError as exc:
        raise SingularMatrixError("matrix is singular") from exc
    if not np.isfinite(Ainv).all():
        raise SingularMatrixError("inverse has non-finite entries")
    resid = max_abs(A @ Ainv - np.eye(A.shape[0]))
    cond = max_abs(A) * max_abs(Ainv) * A.shape[0]
    if resid > 1e-10 * max(1.0, cond):
        raise SingularMatrixError(
            f"inversion residual {resid:.3e} too large (cond-scaled bound {1e-10 * max(1.0, cond):.3e})"
        )
    return Ainv


def expm(A) -> np.ndarray:
    """Matrix exponential (scaling-and-squaring Pade, via scipy).

    Works for arbitrary real square matrices; no diagonalizability needed.
    """
    A = as_matrix(A)
    E = scipy.linalg.expm(A)
    if not np.isfinite(E).all():
        raise OverflowError_("matrix exponential overflowed floating range")
    return E


#: Eigenvalues below this (relative) threshold block negative powers.
ZERO_EIG_TOL_SCALE = 1e-12


def powers_from_decomposition(dec: SpectralDecomposition, num: int, den: int,
                              zero_tol: float) -> np.ndarray:
    """T diag(rpow(lambda_i, num, den)) T^{-1} for a precomputed decomposition."""
    if num < 0 and np.min(np.abs(dec.lambdas)) < zero_tol:
        raise ZeroEigenvalueError(
            f"negative power {num}/{den} with eigenvalue of magnitude "
            f"{np.min(np.abs(dec.lambdas)):.3e}"
        )
    d = np.array([rpow(lam, num, den) for lam in dec.lambdas])
    return dec.T @ (d[:, None] * dec.T_inv)


def frac_power(A, num: int, den: int, gap_tol: float | None = None) -> np.ndarray:
    """Real fractional matrix power A^{num/den} for odd den.

    Spectral route: requires distinct real eigenvalues.  Negative
    eigenvalues get the real odd den-th root, so the result stays real.
    """
    A = as_matrix(A)
    dec = eig_real_simple(A, gap_tol)
    zero_tol = ZERO_EIG_TOL_SCALE * (1.0 + max_abs(A))
    return powers_from_decomposition(dec, num, den, zero_tol)


def perturb_to_simple(A, B, eps: float) -> np.ndarray:
    """A + eps*B.  Verifying that the result has a simple real spectrum is
    the caller's job (solve_limit_perturbation does it for the ladder)."""
    A = as_matrix(A)
    B = as_matrix(B)
    if B.shape != A.shape:
        raise DomainError(f"B shape {B.shape} does not match A shape {A.shape}")
    if eps < 0.0:
        raise DomainError(f"eps must be nonnegative, got {eps}")
    return A + eps * B
