"""Adaptive quadrature and the spectral bound constants.

The integration engine is a batched Gauss-Kronrod 7/15 bisection scheme:
each refinement round evaluates every pending interval in one vectorized
call, locally accepts intervals whose error share is small, and stops as
soon as the global error estimate drops under the requested tolerance.
Improper integrals are truncated with dyadic blocks driven by analytic
tail majorants.

On top of the engine sit the four constants of the minimal-eigenvalue
analysis: the lower and upper bound constants, the limiting eigenvector
normalization constant, and its finite-n counterpart.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .symbols import limit_symbol

__all__ = [
    "QuadResult",
    "BoundConstants",
    "QuadratureConvergenceError",
    "integrate_adaptive",
    "lower_bound_constant",
    "upper_bound_constant",
    "norm_constant_limit",
    "norm_constant",
    "compute_bound_constants",
]

# Gauss-Kronrod 7/15 pair on [-1, 1]: Kronrod abscissae (positive half),
# Kronrod weights, and the embedded 7-point Gauss weights.
_XGK = np.array([
    0.9914553711208126,
    0.9491079123427585,
    0.8648644233597691,
    0.7415311855993945,
    0.5860872354676911,
    0.4058451513773972,
    0.2077849550078985,
    0.0,
])
_WGK = np.array([
    0.0229353220105292,
    0.0630920926299785,
    0.1047900103222502,
    0.1406532597155259,
    0.1690047266392679,
    0.1903505780647854,
    0.2044329400752989,
    0.2094821410847278,
])
_WG = np.array([
    0.1294849661688697,
    0.2797053914892767,
    0.3818300505051189,
    0.4179591836734694,
])

# full 15-node layout, ascending
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_WK15 = np.concatenate([_WGK[:-1], _WGK[::-1]])
# positions of the embedded Gauss nodes within _NODES
_GIDX = np.array([1, 3, 5, 7, 9, 11, 13])
_WG7 = np.concatenate([_WG[:-1], _WG[::-1]])

_INTERVAL_BUDGET = 1 << 20
_MAX_ROUNDS = 64
_PATCH_RADIUS = 1e-6


class QuadratureConvergenceError(RuntimeError):
    """The adaptive scheme could not meet the tolerance within budget."""


@dataclass(frozen=True)
class QuadResult:
    """Value, error estimate, and cost of one quadrature computation."""

    value: float
    abs_error_estimate: float
    evaluations: int


@dataclass(frozen=True)
class BoundConstants:
    """The two minimal-eigenvalue bound constants and the limit
    normalization constant."""

    k1: float
    k2: float
    c_infinity: float

    def __post_init__(self):
        if not (0.0 < self.k2 < self.k1 and self.c_infinity > 0.0):
            raise ValueError("bound constants must satisfy 0 < k2 < k1, c > 0")


def integrate_adaptive(f, a, b, tol=1e-10):
    """Integrate a vectorized real function f over [a, b] to absolute
    tolerance tol.

    f must accept an ndarray of abscissae and return values of the same
    shape, finite everywhere on (a, b).  Raises
    QuadratureConvergenceError when the interval budget (2^20) is
    exhausted before the error estimate falls under tol.
    """
    a = float(a)
    b = float(b)
    if not (np.isfinite(a) and np.isfinite(b) and a < b):
        raise ValueError("need finite a < b")
    if tol <= 0.0:
        raise ValueError("tol must be positive")

    span = b - a
    lo = np.array([a])
    hi = np.array([b])
    value = 0.0
    err_done = 0.0
    evals = 0
    created = 1

    for _ in range(_MAX_ROUNDS):
        mid = 0.5 * (lo + hi)
        half = 0.5 * (hi - lo)
        x = mid[:, None] + half[:, None] * _NODES
        fx = np.asarray(f(x.ravel()), dtype=float).reshape(x.shape)
        evals += x.size
        if not np.all(np.isfinite(fx)):
            raise QuadratureConvergenceError("integrand returned a non-finite value")

        v15 = half * (fx @ _WK15)
        v7 = half * (fx[:, _GIDX] @ _WG7)
        err = np.abs(v15 - v7)

        total = err_done + float(err.sum())
        width = hi - lo
        settled = (
            (err <= 0.5 * tol * width / span)
            | (err <= 1e-16 * np.abs(v15))
            | (width <= 1e-14 * span)
        )
        if total <= tol or bool(settled.all()):
            return QuadResult(value + float(v15.sum()), total, evals)

        value += float(v15[settled].sum())
        err_done += float(err[settled].sum())
        active = ~settled
        lo = np.concatenate([lo[active], mid[active]])
        hi = np.concatenate([mid[active], hi[active]])
        created += lo.size
        if created > _INTERVAL_BUDGET:
            raise QuadratureConvergenceError(
                f"interval budget {_INTERVAL_BUDGET} exhausted at error {total:.3e}"
            )

    raise QuadratureConvergenceError("bisection depth exceeded")


def _integrate_dyadic_tail(f, start, block_tol, tail_bound, tail_target,
                           max_doublings=64):
    """Sum adaptive integrals over dyadic blocks [U, 2U] from `start`
    until `tail_bound(U)` (a majorant for the remaining |integral|)
    drops under `tail_target`."""
    value = 0.0
    err = 0.0
    evals = 0
    upper = float(start)
    for j in range(max_doublings):
        bound = tail_bound(upper)
        if bound <= tail_target:
            return value, err + bound, evals
        block = integrate_adaptive(f, upper, 2.0 * upper,
                                   tol=block_tol * 0.5 ** (j + 1))
        value += block.value
        err += block.abs_error_estimate
        evals += block.evaluations
        upper *= 2.0
    raise QuadratureConvergenceError("tail truncation did not converge")


def _check_tol(tol):
    if tol < 1e-12:
        raise ValueError("tol must be at least 1e-12")


def _window(u):
    """cos(u/2)^2 / (u^2 - pi^2)^2, the spectral window weight, written
    through sin((u-pi)/2) so the double zero cancels the double pole.

    Finite everywhere, value 1/(16 pi^2) at u = pi.
    """
    u = np.asarray(u, dtype=float)
    d = u - np.pi
    ratio = np.empty_like(d)
    near = np.abs(d) < _PATCH_RADIUS
    ratio[near] = 0.5 * (1.0 - d[near] ** 2 / 24.0)
    dn = d[~near]
    ratio[~near] = np.sin(dn / 2.0) / dn
    return (ratio / (u + np.pi)) ** 2


def _growth(u):
    """(u^2 - u)/log(u) = u * (u-1)/log1p(u-1), patched at u = 1."""
    u = np.asarray(u, dtype=float)
    out = np.empty_like(u)
    d = u - 1.0
    near = np.abs(d) < _PATCH_RADIUS
    out[near] = u[near] * (1.0 + d[near] / 2.0 - d[near] ** 2 / 12.0)
    with np.errstate(divide="ignore"):
        out[~near] = u[~near] * d[~near] / np.log1p(d[~near])
    return out


def lower_bound_constant(tol=1e-8, detail=False):
    """Lower bound constant k2 = (1/pi) * int_0^pi (s^2 - s)/log(s) ds.

    n * lambda_min of the order-n system matrix stays above this value.
    """
    _check_tol(tol)
    res = integrate_adaptive(limit_symbol, 0.0, np.pi, tol=tol * np.pi / 2.0)
    out = QuadResult(res.value / np.pi, res.abs_error_estimate / np.pi,
                     res.evaluations)
    return out if detail else out.value


def norm_constant_limit(tol=1e-8, detail=False):
    """Limiting eigenvector normalization constant
    c = ((16/pi) * int_0^inf cos(u/2)^2/(u^2-pi^2)^2 du)^(-1/2)."""
    _check_tol(tol)
    # error in c is about c/(2I) ~ 28 times the error in the integral
    tol_i = tol / 30.0
    head = integrate_adaptive(_window, 0.0, 4.0 * np.pi, tol=tol_i / 2.0)

    def tail_bound(upper):
        return (1.0 - (np.pi / upper) ** 2) ** -2 / (3.0 * upper**3)

    tail_val, tail_err, tail_evals = _integrate_dyadic_tail(
        _window, 4.0 * np.pi, tol_i / 4.0, tail_bound, tol_i / 4.0
    )
    integral = head.value + tail_val
    err_i = head.abs_error_estimate + tail_err
    c = (16.0 / np.pi * integral) ** -0.5
    err_c = c / (2.0 * integral) * err_i
    out = QuadResult(c, err_c, head.evaluations + tail_evals)
    return out if detail else out.value


def upper_bound_constant(tol=1e-8, detail=False):
    """Upper bound constant k1: the ratio

        int_0^inf (u^2-u)/log(u) * cos(u/2)^2/(u^2-pi^2)^2 du
        -----------------------------------------------------
        int_0^pi          cos(u/2)^2/(u^2-pi^2)^2 du

    n * lambda_min of the order-n system matrix stays below this value.
    The slowly decaying numerator tail, O(1/(u^2 log u)), is split into
    its mean and oscillating halves via cos(u/2)^2 = (1 + cos u)/2; the
    mean half is truncated with an integral majorant, the oscillating
    half with a Dirichlet-type bound.
    """
    _check_tol(tol)

    def numer(u):
        return _growth(u) * _window(u)

    denom = integrate_adaptive(_window, 0.0, np.pi, tol=tol * 2e-3)
    tol_n = tol * denom.value / 2.0

    cut = 16.0 * np.pi
    head = integrate_adaptive(numer, 0.0, cut, tol=tol_n / 4.0)

    def _phi(u):
        # numerator envelope (u^2-u)/((u^2-pi^2)^2 log u), no oscillation
        u = np.asarray(u, dtype=float)
        return (u**2 - u) / ((u**2 - np.pi**2) ** 2 * np.log(u))

    def mean_half(u):
        return 0.5 * _phi(u)

    def mean_tail_bound(upper):
        return 0.5 * (1.0 - (np.pi / upper) ** 2) ** -2 / (upper * np.log(upper))

    mean_val, mean_err, mean_evals = _integrate_dyadic_tail(
        mean_half, cut, tol_n / 8.0, mean_tail_bound, tol_n / 4.0
    )

    def osc_half(u):
        return 0.5 * _phi(u) * np.cos(u)

    def osc_tail_bound(upper):
        # |int_U^inf phi cos| <= 2 phi(U) for decreasing phi
        return float(_phi(np.array([upper]))[0])

    osc_val, osc_err, osc_evals = _integrate_dyadic_tail(
        osc_half, cut, tol_n / 8.0, osc_tail_bound, tol_n / 4.0
    )

    numer_val = head.value + mean_val + osc_val
    numer_err = head.abs_error_estimate + mean_err + osc_err
    k1 = numer_val / denom.value
    err_k1 = (numer_err + abs(k1) * denom.abs_error_estimate) / denom.value
    out = QuadResult(
        k1,
        err_k1,
        denom.evaluations + head.evaluations + mean_evals + osc_evals,
    )
    return out if detail else out.value


def _eigfun_sq(n, theta):
    """|laplacian eigenfunction|^2 in the stable product form
    sin((n+1)(theta-s)/2)^2 / ((n+1)^3 sin((theta-s)/2)^2 sin((theta+s)/2)^2),
    finite through the removable poles."""
    theta = np.asarray(theta, dtype=float)
    s = np.pi / (n + 1)
    d = (theta - s) / 2.0
    ratio = np.empty_like(d)
    near = np.abs(d) < _PATCH_RADIUS
    # sin((n+1)x)/sin(x) -> n+1 as x -> 0, next order -((n+1)^3-(n+1))/6 x^2
    m = n + 1
    ratio[near] = m - (m**3 - m) / 6.0 * d[near] ** 2
    dn = d[~near]
    ratio[~near] = np.sin(m * dn) / np.sin(dn)
    return ratio**2 / (m**3 * np.sin((theta + s) / 2.0) ** 2)


def norm_constant(n, tol=1e-8, detail=False):
    """Finite-n eigenvector normalization constant
    c_n = ((1/pi) * int_0^pi |psi(theta)|^2 dtheta)^(-1/2),
    converging to norm_constant_limit as n grows."""
    if n < 2:
        raise ValueError("n must be at least 2")
    _check_tol(tol)
    s = np.pi / (n + 1)
    f = lambda th: _eigfun_sq(n, th)
    # split at the removable pole so each piece is smooth inside
    left = integrate_adaptive(f, 0.0, s, tol=tol / 8.0)
    right = integrate_adaptive(f, s, np.pi, tol=tol / 8.0)
    integral = (left.value + right.value) / np.pi
    err_i = (left.abs_error_estimate + right.abs_error_estimate) / np.pi
    c = integral**-0.5
    err_c = 0.5 * c / integral * err_i
    out = QuadResult(c, err_c, left.evaluations + right.evaluations)
    return out if detail else out.value


def compute_bound_constants(tol=1e-8):
    """All three constants in one BoundConstants record."""
    return BoundConstants(
        k1=upper_bound_constant(tol),
        k2=lower_bound_constant(tol),
        c_infinity=norm_constant_limit(tol),
    )
