"""Scalar special functions: real odd-root powers, the generalized
factorial, and a series-based Mittag-Leffler evaluator.

The Mittag-Leffler routine is deliberately independent of the solver
modules; it serves as the reference oracle the solution formulas are
checked against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, NonConvergenceError, PoleError, ZeroEigenvalueError

#: Documented accuracy domain for the plain power series.
ML_MAX_ABS_Z = 30.0


def rpow(x: float, num: int, den: int) -> float:
    """Real odd-root power sign(x)^num * |x|^(num/den).

    den must be a positive odd integer, which makes the den-th real root
    well defined for negative x.  This is the mechanism that keeps the
    whole solution representation real for negative eigenvalues.
    """
    if den <= 0 or den % 2 == 0:
        raise DomainError(f"den must be a positive odd integer, got {den}")
    if x == 0.0:
        if num < 0:
            raise ZeroEigenvalueError("negative power of zero")
        return 1.0 if num == 0 else 0.0
    mag = abs(x) ** (num / den)
    if x < 0.0 and num % 2 != 0:
        return -mag
    return mag


def gfact(z: float) -> float:
    """Generalized factorial z! = Gamma(z+1) for real z.

    Raises PoleError when z+1 is a nonpositive integer.
    """
    w = z + 1.0
    if w <= 0.0 and w == math.floor(w):
        raise PoleError(f"gamma pole at z+1 = {w}")
    try:
        return math.gamma(w)
    except (ValueError, OverflowError) as exc:
        raise PoleError(f"gamma({w}) failed: {exc}") from exc


@dataclass(frozen=True)
class MLParams:
    """Series parameters for E_{alpha,beta}."""

    alpha: float
    beta: float = 1.0
    max_terms: int = 200_000
    tail_tol: float = 1e-16

    def __post_init__(self) -> None:
        if self.alpha <= 0.0:
            raise DomainError(f"alpha must be positive, got {self.alpha}")
        if self.tail_tol <= 0.0:
            raise DomainError(f"tail_tol must be positive, got {self.tail_tol}")
        if self.max_terms < 1:
            raise DomainError(f"max_terms must be >= 1, got {self.max_terms}")


def _series_term(z: float, k: int, g: float) -> float:
    """z^k / Gamma(g), routed through logs to dodge intermediate overflow."""
    if g <= 0.0 and g == math.floor(g):
        return 0.0  # 1/Gamma vanishes at poles
    if z == 0.0:
        return 1.0 / math.gamma(g) if k == 0 else 0.0
    sign = -1.0 if (z < 0.0 and k % 2 == 1) else 1.0
    if g < 171.0:
        denom = math.gamma(g)  # finite here: poles were screened above
        if denom == 0.0:
            return 0.0
        mag = math.exp(k * math.log(abs(z)) - math.log(abs(denom)))
        return sign * math.copysign(mag, denom)
    # Large g: Gamma overflows but the term itself is tame.
    return sign * math.exp(k * math.log(abs(z)) - math.lgamma(g))


def mittag_leffler(params: MLParams, z: float) -> float:
    """E_{alpha,beta}(z) by direct series with exact (fsum) accumulation.

    Accuracy: absolute error <= 1e-10 for |z| <= 5; for larger arguments
    the truncated series still converges but alternating cancellation for
    strongly negative z erodes the attainable accuracy.  Arguments with
    |z| > 30 are rejected.
    """
    if abs(z) > ML_MAX_ABS_Z:
        raise DomainError(f"|z| = {abs(z)} outside documented domain |z| <= {ML_MAX_ABS_Z}")
    terms: list[float] = []
    prev = math.inf
    for k in range(params.max_terms):
        g = params.alpha * k + params.beta
        try:
            t = _series_term(z, k, g)
        except OverflowError as exc:
            raise NonConvergenceError(
                f"series term k={k} for E_({params.alpha},{params.beta})({z}) "
                f"overflowed double range"
            ) from exc
        terms.append(t)
        at = abs(t)
        # Terms decay super-geometrically once alpha*k+beta outgrows |z|;
        # requiring two consecutive small, shrinking terms bounds the tail.
        if at <= params.tail_tol and at <= prev and k > 0:
            return math.fsum(terms)
        prev = at
    raise NonConvergenceError(
        f"series for E_({params.alpha},{params.beta})({z}) did not reach "
        f"tail_tol={params.tail_tol} within {params.max_terms} terms"
    )
