"""Adaptive Simpson quadrature for scalar- or array-valued integrands.

Used by the Simpson solver backend after the power substitution has
already removed the weakly singular endpoint, so integrands seen here are
smooth.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from .errors import QuadratureFailureError

MAX_DEPTH = 40


def _err(a) -> float:
    return float(np.max(np.abs(a)))


def adaptive_simpson(f: Callable[[float], "np.ndarray | float"], a: float, b: float,
                     tol: float, max_depth: int = MAX_DEPTH):
    """Integral of f over [a, b] with |error| (max-abs) roughly <= tol."""
    if b < a:
        raise QuadratureFailureError(f"reversed interval [{a}, {b}]")
    fa, fb = f(a), f(b)
    if b == a:
        return 0.0 * fa
    m = 0.5 * (a + b)
    fm = f(m)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    return _simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth)


def _simpson_rec(f, a, b, fa, fm, fb, whole, tol, depth):
    m = 0.5 * (a + b)
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    flm = f(lm)
    frm = f(rm)
    left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
    right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
    delta = left + right - whole
    if _err(delta) <= 15.0 * tol:
        return left + right + delta / 15.0
    if depth <= 0:
        raise QuadratureFailureError(
            f"adaptive Simpson exceeded depth bound on [{a}, {b}]"
        )
    return (
        _simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + _simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    )
