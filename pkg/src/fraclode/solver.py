"""Solution formulas for D^alpha x = A x, x(t0) = x0, alpha = (2p+1)/(2q+1).

Two numerical backends share one structure: an s-indexed sum of boundary
terms plus weakly singular convolution integrals, closed by the matrix
(or scalar) exponential of the odd-root power of A.

* Rectangle: the literal left-endpoint Riemann discretization on a
  uniform grid -- kept exactly as formulated so the scheme itself is
  testable, slow convergence and all.
* Simpson: each singular integral is first regularized by the exact
  substitution W = (t - tau)^((s+1)/(2q+1)), after which the integrand is
  smooth and adaptive Simpson applies.

For q = 0 (alpha = 1) every backend degenerates to the classical matrix
exponential.  The representation is singular AT t0 for alpha < 1, so all
evaluation grids must start strictly after t0.

A note on the reference closed form (`scalar_closed_form`): expanding the
regularized integrals in power series and re-indexing collapses the whole
s-sum to

    y(t) = y0 * (r*u)^(mu-1) * E_{mu,mu}((r*u)^mu),
    u = t - t0,  mu = 1/(2q+1),  r = lambda^((2q+1)/(2p+1)) (real odd root),

with all powers of the (possibly negative) r*u taken as real odd roots.
For p = 0 this is the classical Riemann-Liouville eigenfunction
u^(alpha-1) E_{alpha,alpha}(lambda u^alpha) scaled by the constant
lambda^((alpha-1)/alpha); for p > 0 it is not proportional to either
textbook candidate.  The identity is verified to 40 digits in
tests/fixtures/closed_form_reference.json.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import (
    DomainError,
    NonConvergenceError,
    NonUniformGridError,
    OverflowError_,
    ZeroEigenvalueError,
)
from .linalg import (
    ZERO_EIG_TOL_SCALE,
    as_matrix,
    eig_real_simple,
    expm,
    max_abs,
    perturb_to_simple,
    powers_from_decomposition,
)
from .quadrature import adaptive_simpson
from .rational_order import FractionalOrder
from .specfun import MLParams, gfact, mittag_leffler, rpow

DEFAULT_SIMPSON_TOL = 1e-10


class Quadrature(Enum):
    RECTANGLE = "rectangle"
    SIMPSON = "simpson"


class SumRange(Enum):
    """Which s-terms besides the exponential closer enter the sum.

    FROM_ZERO keeps s = 0..2q-1 (the full representation; default),
    FROM_ONE keeps s = 1..2q-1 (the truncated variant some discretized
    displays of the formula show).  The closed-form oracle confirms
    FROM_ZERO; FROM_ONE is retained for comparison experiments.
    """

    FROM_ZERO = "from_zero"
    FROM_ONE = "from_one"


@dataclass(frozen=True)
class CauchyProblem:
    """The initial-value problem D^alpha x = A x, x(t0) = x0."""

    A: np.ndarray
    x0: np.ndarray
    t0: float
    order: FractionalOrder

    def __post_init__(self) -> None:
        A = as_matrix(self.A)
        x0 = np.asarray(self.x0, dtype=float).reshape(-1)
        if x0.shape[0] != A.shape[0]:
            raise DomainError(
                f"x0 has length {x0.shape[0]} but A is {A.shape[0]}x{A.shape[0]}"
            )
        if not np.isfinite(x0).all():
            raise DomainError("x0 entries must be finite")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "x0", x0)

    @property
    def n(self) -> int:
        return self.A.shape[0]


@dataclass
class SolveConfig:
    """Evaluation grid and backend selection."""

    grid: np.ndarray
    quadrature: Quadrature = Quadrature.RECTANGLE
    simpson_tol: float = DEFAULT_SIMPSON_TOL
    sum_range: SumRange = SumRange.FROM_ZERO

    def __post_init__(self) -> None:
        self.grid = np.asarray(self.grid, dtype=float).reshape(-1)
        if self.grid.size == 0:
            raise DomainError("grid must be nonempty")
        if self.simpson_tol <= 0.0:
            raise DomainError(f"simpson_tol must be positive, got {self.simpson_tol}")


@dataclass
class Trajectory:
    """Sampled solution: states[k] = x(times[k])."""

    times: np.ndarray
    states: np.ndarray

    def __post_init__(self) -> None:
        self.times = np.asarray(self.times, dtype=float).reshape(-1)
        self.states = np.asarray(self.states, dtype=float)
        if self.states.ndim == 1:
            self.states = self.states[:, None]
        if self.states.shape[0] != self.times.shape[0]:
            raise DomainError("states and times length mismatch")
        if len(self.times) > 1 and np.min(np.diff(self.times)) <= 0.0:
            raise DomainError("times must be strictly increasing")
        if not np.isfinite(self.states).all():
            raise OverflowError_("trajectory states overflowed floating range")

    @property
    def values(self) -> np.ndarray:
        """First component, convenient for scalar problems."""
        return self.states[:, 0]


def _check_times(times, t0: float) -> np.ndarray:
    times = np.asarray(times, dtype=float).reshape(-1)
    if times.size == 0:
        raise DomainError("empty time grid")
    if len(times) > 1 and np.min(np.diff(times)) <= 0.0:
        raise DomainError("times must be strictly increasing")
    if times[0] <= t0:
        raise DomainError(
            f"grid must start strictly after t0={t0} (representation is singular at t0)"
        )
    return times


def _rect_lattice(times: np.ndarray, t0: float) -> tuple[float, np.ndarray]:
    """Step h and lattice indices k with times = t0 + k*h.

    The rectangle rule needs quadrature nodes at every t0 + sigma*h below
    each output time, so the output grid must sit on the t0-anchored
    uniform lattice (it need not start at t0 + h).
    """
    if len(times) > 1:
        diffs = np.diff(times)
        h = float(np.min(diffs))
        if np.max(np.abs(diffs - np.round(diffs / h) * h)) > 1e-9 * h:
            raise NonUniformGridError("rectangle backend requires a uniform grid step")
    else:
        h = float(times[0] - t0)
    ks = (times - t0) / h
    k_int = np.round(ks).astype(int)
    if np.max(np.abs(ks - k_int)) > 1e-6 or np.min(k_int) < 1:
        raise NonUniformGridError(
            "rectangle backend requires grid points on the lattice t0 + k*h, k >= 1"
        )
    return h, k_int


def _sum_start(sum_range: SumRange) -> int:
    return 0 if sum_range is SumRange.FROM_ZERO else 1


def solve_scalar_rect(lam: float, y0: float, order: FractionalOrder, t0: float,
                      grid, sum_range: SumRange = SumRange.FROM_ZERO) -> Trajectory:
    """Left-endpoint rectangle discretization of the scalar representation.

    For q = 0 the s-sum is empty and the result is exactly
    y0 * exp(r (t-t0)).
    """
    if lam == 0.0:
        raise ZeroEigenvalueError("lambda = 0 admits no fractional powers")
    times = _check_times(grid, t0)
    p, q = order.p, order.q
    r = rpow(lam, 2 * q + 1, 2 * p + 1)
    u = times - t0
    y = y0 * np.exp(r * u)
    if q > 0:
        h, k_idx = _rect_lattice(times, t0)
        k_max = int(k_idx[-1])
        sigma_t = h * np.arange(k_max)  # t_sigma - t0, sigma = 0..k_max-1
        E = np.exp(r * sigma_t)
        dist = h * np.arange(1, k_max + 1)
        for s in range(_sum_start(sum_range), 2 * q):
            g = (s - 2 * q) / (2 * q + 1)
            c = rpow(lam, s - 2 * q, 2 * p + 1) / gfact(g)
            pw = dist ** g
            # full[k-1] = sum_{sigma=0}^{k-1} ((k-sigma) h)^g * E[sigma]
            full = np.convolve(E, pw)[:k_max]
            y = y + y0 * c * (u ** g + r * h * full[k_idx - 1])
    traj = Trajectory(times=times, states=y[:, None])
    return traj


def _cumulative_regularized_integrals(r: float, m: float, bounds: np.ndarray,
                                      tol: float) -> np.ndarray:
    """J[k] = int_0^{bounds[k]} exp(-r W^m) dW, accumulated per segment."""
    total_len = float(bounds[-1])
    J = np.empty(len(bounds))
    acc = 0.0
    prev = 0.0
    for k, b in enumerate(bounds):
        seg = b - prev
        seg_tol = tol * max(seg / total_len, 1e-3)
        acc += adaptive_simpson(lambda W: math.exp(-r * W ** m), prev, b, seg_tol)
        J[k] = acc
        prev = b
    return J


def solve_scalar_quad(lam: float, y0: float, order: FractionalOrder, t0: float,
                      times, simpson_tol: float = DEFAULT_SIMPSON_TOL,
                      sum_range: SumRange = SumRange.FROM_ZERO) -> Trajectory:
    """Scalar representation with regularized integrals and adaptive Simpson.

    Each integral int_{t0}^{t} (t-tau)^g e^{(tau-t0) r} dtau is evaluated
    after the substitution W = (t-tau)^((s+1)/(2q+1)), which removes the
    singular endpoint exactly:

        integral = ((2q+1)/(s+1)) * e^{r u} * int_0^{u^((s+1)/(2q+1))} e^{-r W^m} dW,
        m = (2q+1)/(s+1).
    """
    if lam == 0.0:
        raise ZeroEigenvalueError("lambda = 0 admits no fractional powers")
    if simpson_tol <= 0.0:
        raise DomainError(f"simpson_tol must be positive, got {simpson_tol}")
    times = _check_times(times, t0)
    p, q = order.p, order.q
    r = rpow(lam, 2 * q + 1, 2 * p + 1)
    u = times - t0
    y = y0 * np.exp(r * u)
    for s in range(_sum_start(sum_range), 2 * q):
        g = (s - 2 * q) / (2 * q + 1)
        m = (2 * q + 1) / (s + 1)
        c = rpow(lam, s - 2 * q, 2 * p + 1) / gfact(g)
        bounds = u ** (1.0 / m)
        J = _cumulative_regularized_integrals(r, m, bounds, simpson_tol)
        integral = m * np.exp(r * u) * J
        y = y + y0 * c * (u ** g + r * integral)
    return Trajectory(times=times, states=y[:, None])


def scalar_closed_form(lam: float, y0: float, order: FractionalOrder, t0: float,
                       times, tail_tol: float = 1e-16) -> Trajectory:
    """Mittag-Leffler closed form of the scalar representation (the oracle).

    y(t) = y0 * (r u)^(mu-1) * E_{mu,mu}((r u)^mu) with mu = 1/(2q+1) and
    r = lambda^((2q+1)/(2p+1)), all powers real odd roots.  Independent of
    both quadrature backends; see the module docstring.
    """
    if lam == 0.0:
        raise ZeroEigenvalueError("lambda = 0 admits no fractional powers")
    times = _check_times(times, t0)
    p, q = order.p, order.q
    r = rpow(lam, 2 * q + 1, 2 * p + 1)
    mu = 1.0 / (2 * q + 1)
    params = MLParams(alpha=mu, beta=mu, tail_tol=tail_tol)
    out = np.empty(len(times))
    for k, t in enumerate(times):
        ru = r * (t - t0)
        z = rpow(ru, 1, 2 * q + 1)
        pref = rpow(ru, -2 * q, 2 * q + 1)
        out[k] = y0 * pref * mittag_leffler(params, z)
    return Trajectory(times=times, states=out[:, None])


def classical_exponential(problem: CauchyProblem, times) -> Trajectory:
    """x(t) = expm((t - t0) A) x0 -- the alpha = 1 reference."""
    times = np.asarray(times, dtype=float).reshape(-1)
    if times.size == 0:
        raise DomainError("empty time grid")
    if len(times) > 1 and np.min(np.diff(times)) <= 0.0:
        raise DomainError("times must be strictly increasing")
    states = np.empty((len(times), problem.n))
    for k, t in enumerate(times):
        states[k] = expm((t - problem.t0) * problem.A) @ problem.x0
    return Trajectory(times=times, states=states)


def _spectral_setup(problem: CauchyProblem):
    dec = eig_real_simple(problem.A)
    zero_tol = ZERO_EIG_TOL_SCALE * (1.0 + max_abs(problem.A))
    if np.min(np.abs(dec.lambdas)) < zero_tol:
        raise ZeroEigenvalueError(
            "A has a (near-)zero eigenvalue; negative fractional powers are undefined"
        )
    return dec, zero_tol


def solve_matrix(problem: CauchyProblem, config: SolveConfig) -> Trajectory:
    """Matrix-form solution on the configured grid.

    Requires distinct real eigenvalues for q > 0 (the fractional powers of
    A are spectral); for q = 0 it reduces to the classical exponential and
    places no spectral requirement on A.
    """
    p, q = problem.order.p, problem.order.q
    times = _check_times(config.grid, problem.t0)
    if q == 0:
        return classical_exponential(problem, times)

    dec, zero_tol = _spectral_setup(problem)
    M = powers_from_decomposition(dec, 2 * q + 1, 2 * p + 1, zero_tol)
    A_pows = {
        s: powers_from_decomposition(dec, s - 2 * q, 2 * p + 1, zero_tol)
        for s in range(_sum_start(config.sum_range), 2 * q)
    }
    if config.quadrature is Quadrature.RECTANGLE:
        return _solve_matrix_rect(problem, times, M, A_pows, q)
    return _solve_matrix_simpson(problem, times, M, A_pows, q, config.simpson_tol)


def _solve_matrix_rect(problem, times, M, A_pows, q) -> Trajectory:
    t0, x0 = problem.t0, problem.x0
    n = problem.n
    h, k_idx = _rect_lattice(times, t0)
    k_max = int(k_idx[-1])
    u = times - t0

    F = expm(h * M)
    # v[sigma] = expm(sigma h M) x0 at the quadrature nodes t0 + sigma*h.
    v = np.empty((k_max, n))
    v[0] = x0
    for sigma in range(1, k_max):
        v[sigma] = F @ v[sigma - 1]
    # w[k-1] = expm(k h M) x0; the exponential closer sampled on the lattice.
    w = np.empty((k_max, n))
    w[0] = F @ x0
    for k in range(1, k_max):
        w[k] = F @ w[k - 1]

    states = w[k_idx - 1].copy()
    dist = h * np.arange(1, k_max + 1)
    for s, A_s in A_pows.items():
        g = (s - 2 * q) / (2 * q + 1)
        c = 1.0 / gfact(g)
        pw = dist ** g
        S = np.empty((k_max, n))
        for j in range(n):
            S[:, j] = np.convolve(v[:, j], pw)[:k_max]
        S = S[k_idx - 1]
        inner = c * (u[:, None] ** g) * x0[None, :] + c * h * (S @ M.T)
        states = states + inner @ A_s.T
    if not np.isfinite(states).all():
        raise OverflowError_("matrix rectangle solve overflowed")
    return Trajectory(times=times, states=states)


def _solve_matrix_simpson(problem, times, M, A_pows, q, simpson_tol) -> Trajectory:
    t0, x0 = problem.t0, problem.x0
    K = len(times)
    n = problem.n
    u = times - t0

    Eks = [expm(uk * M) for uk in u]
    states = np.stack([Ek @ x0 for Ek in Eks])
    for s, A_s in A_pows.items():
        g = (s - 2 * q) / (2 * q + 1)
        m = (2 * q + 1) / (s + 1)
        c = 1.0 / gfact(g)
        bounds = u ** (1.0 / m)
        total_len = float(bounds[-1])
        acc = np.zeros(n)
        prev = 0.0
        term = np.empty((K, n))
        for k, b in enumerate(bounds):
            seg = b - prev
            seg_tol = simpson_tol * max(seg / total_len, 1e-3)
            acc = acc + adaptive_simpson(
                lambda W: expm(-(W ** m) * M) @ x0, prev, b, seg_tol
            )
            prev = b
            integral = m * (Eks[k] @ acc)
            term[k] = c * (u[k] ** g) * x0 + c * (M @ integral)
        states = states + term @ A_s.T
    if not np.isfinite(states).all():
        raise OverflowError_("matrix Simpson solve overflowed")
    return Trajectory(times=times, states=states)


def solve_via_spectral(problem: CauchyProblem, config: SolveConfig) -> Trajectory:
    """Decouple through T^{-1} A T = diag(lambda), solve scalars, recompose."""
    times = _check_times(config.grid, problem.t0)
    p, q = problem.order.p, problem.order.q
    if q == 0:
        return classical_exponential(problem, times)
    dec, _ = _spectral_setup(problem)
    y0 = dec.T_inv @ problem.x0
    Y = np.empty((len(times), problem.n))
    for i, lam in enumerate(dec.lambdas):
        if config.quadrature is Quadrature.RECTANGLE:
            traj = solve_scalar_rect(lam, y0[i], problem.order, problem.t0, times,
                                     sum_range=config.sum_range)
        else:
            traj = solve_scalar_quad(lam, y0[i], problem.order, problem.t0, times,
                                     simpson_tol=config.simpson_tol,
                                     sum_range=config.sum_range)
        Y[:, i] = traj.values
    return Trajectory(times=times, states=Y @ dec.T.T)


def solve_limit_perturbation(problem: CauchyProblem, B, eps_ladder,
                             config: SolveConfig) -> tuple[Trajectory, list[float]]:
    """Solve A + eps B down a decreasing eps ladder; return the smallest-eps
    trajectory plus sup-norm gaps between consecutive rungs.

    Every rung must have a simple real spectrum (ComplexSpectrum otherwise);
    gaps that grow along the ladder raise NonConvergence.
    """
    eps_ladder = [float(e) for e in eps_ladder]
    if len(eps_ladder) < 2:
        raise DomainError("eps ladder needs at least two rungs")
    if any(e <= 0.0 for e in eps_ladder):
        raise DomainError("eps ladder entries must be positive")
    if any(b >= a for a, b in zip(eps_ladder, eps_ladder[1:])):
        raise DomainError("eps ladder must be strictly decreasing")
    B = as_matrix(B)

    trajs = []
    for eps in eps_ladder:
        A_eps = perturb_to_simple(problem.A, B, eps)
        eig_real_simple(A_eps)  # raises ComplexSpectrum / ClusteredSpectrum
        rung = CauchyProblem(A=A_eps, x0=problem.x0, t0=problem.t0,
                             order=problem.order)
        trajs.append(solve_matrix(rung, config))

    gaps = [
        float(np.max(np.abs(a.states - b.states)))
        for a, b in zip(trajs, trajs[1:])
    ]
    for g_prev, g_next in zip(gaps, gaps[1:]):
        if g_next > g_prev:
            raise NonConvergenceError(
                f"perturbation ladder gaps grew: {g_prev:.3e} -> {g_next:.3e}"
            )
    return trajs[-1], gaps
