"""Odd-over-odd rational representation of the fractional order.

Every solution formula in this package is parameterized by alpha written
as (2p+1)/(2q+1): odd numerator over odd denominator, which is what makes
real odd roots of negative eigenvalues available downstream.  p = q = 0
encodes alpha = 1.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError, NoRepresentationError, OrderDomainError

DEFAULT_TOL = 1e-6
DEFAULT_Q_MAX = 10**5


@dataclass(frozen=True)
class FractionalOrder:
    """alpha together with its odd-rational approximation (2p+1)/(2q+1)."""

    alpha: float
    p: int
    q: int
    achieved_error: float

    def __post_init__(self) -> None:
        if self.p < 0 or self.q < 0:
            raise OrderDomainError(f"p and q must be nonnegative, got p={self.p}, q={self.q}")
        if self.p > self.q:
            raise OrderDomainError(
                f"p={self.p} > q={self.q} would put (2p+1)/(2q+1) above 1"
            )

    @property
    def value(self) -> float:
        """The represented order (2p+1)/(2q+1)."""
        return (2 * self.p + 1) / (2 * self.q + 1)

    @property
    def numerator(self) -> int:
        return 2 * self.p + 1

    @property
    def denominator(self) -> int:
        return 2 * self.q + 1


def approximate_order(alpha: float, tol: float = DEFAULT_TOL,
                      q_max: int = DEFAULT_Q_MAX) -> FractionalOrder:
    """Smallest-q odd/odd rational (2p+1)/(2q+1) within tol of alpha.

    Scans q upward; for each q the optimal odd numerator is the odd integer
    nearest alpha*(2q+1), so the per-q check is O(1).  Among numerator ties
    the smaller error wins, then the smaller p.
    """
    if not (0.0 < alpha <= 1.0):
        raise DomainError(f"alpha must lie in (0, 1], got {alpha}")
    if tol <= 0.0:
        raise DomainError(f"tol must be positive, got {tol}")
    if q_max < 1:
        raise DomainError(f"q_max must be >= 1, got {q_max}")

    for q in range(0, q_max + 1):
        den = 2 * q + 1
        target = alpha * den
        m0 = 2 * round((target - 1.0) / 2.0) + 1  # odd integer nearest target
        best: tuple[float, int] | None = None
        for m in (m0 - 2, m0, m0 + 2):
            if m < 1 or m > den:
                continue
            err = abs(m / den - alpha)
            cand = (err, (m - 1) // 2)
            if best is None or cand < best:
                best = cand
        if best is not None and best[0] <= tol:
            err, p = best
            return FractionalOrder(alpha=alpha, p=p, q=q, achieved_error=err)

    raise NoRepresentationError(
        f"no (2p+1)/(2q+1) within {tol} of alpha={alpha} for q <= {q_max}"
    )
