"""Conjugate gradient solvers for the preconditioned experiments.

Standard (P)CG with the scaled-residual stopping rule ||r||/||b|| < tol,
plus a fixed-step variant used as a multigrid smoother.  Iteration
counts under the five preconditioners are the package's main solver
experiment.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .preconditioners import apply_inverse

__all__ = ["StoppingRule", "SolveReport", "BreakdownError", "pcg", "cg_smooth_step"]


class BreakdownError(RuntimeError):
    """A CG inner product came out non-positive: the operator or the
    preconditioner is not SPD."""


@dataclass(frozen=True)
class StoppingRule:
    """Scaled-residual stopping: stop at ||b - A x||/||b|| < tol.

    max_iterations defaults to 10 n, resolved against the system size.
    """

    tol: float = 1e-7
    max_iterations: int | None = None

    def __post_init__(self):
        if self.tol <= 0.0:
            raise ValueError("tol must be positive")
        if self.max_iterations is not None and self.max_iterations < 1:
            raise ValueError("max_iterations must be positive")

    def resolve_max(self, n):
        return self.max_iterations if self.max_iterations is not None else 10 * n


@dataclass(frozen=True)
class SolveReport:
    """Outcome of one iterative solve."""

    iterations: int
    residual_history: np.ndarray = field(repr=False)
    converged: bool
    solution: np.ndarray = field(repr=False)


def pcg(apply_A, P, b, x0=None, stop=None):
    """Preconditioned conjugate gradient on A x = b.

    apply_A is any callable realizing the SPD operator; P is a
    Preconditioner (Identity gives plain CG).  Returns a SolveReport
    whose residual_history holds the scaled residual before each
    iteration and after every update; iterations is the first k whose
    scaled residual drops under stop.tol.  Hitting max_iterations
    returns converged=False rather than raising; a non-positive inner
    product raises BreakdownError.
    """
    if stop is None:
        stop = StoppingRule()
    b = np.asarray(b, dtype=float)
    n = b.shape[0]
    x = np.zeros(n) if x0 is None else np.array(x0, dtype=float)
    if x.shape != (n,):
        raise ValueError("x0 length must match b")

    norm_b = np.linalg.norm(b)
    if norm_b == 0.0:
        return SolveReport(0, np.zeros(1), True, np.zeros(n))

    r = b - np.asarray(apply_A(x), dtype=float)
    history = [np.linalg.norm(r) / norm_b]
    if history[0] < stop.tol:
        return SolveReport(0, np.array(history), True, x)

    z = apply_inverse(P, r)
    rho = float(r @ z)
    if rho <= 0.0:
        raise BreakdownError("preconditioned inner product <= 0")
    p = z.copy()

    max_it = stop.resolve_max(n)
    for k in range(1, max_it + 1):
        q = np.asarray(apply_A(p), dtype=float)
        curvature = float(p @ q)
        if curvature <= 0.0:
            raise BreakdownError("operator inner product <= 0")
        alpha = rho / curvature
        x = x + alpha * p
        r = r - alpha * q
        scaled = np.linalg.norm(r) / norm_b
        history.append(scaled)
        if scaled < stop.tol:
            return SolveReport(k, np.array(history), True, x)
        z = apply_inverse(P, r)
        rho_new = float(r @ z)
        if rho_new <= 0.0:
            raise BreakdownError("preconditioned inner product <= 0")
        p = z + (rho_new / rho) * p
        rho = rho_new

    return SolveReport(max_it, np.array(history), False, x)


def cg_smooth_step(apply_A, P, x, b, steps=1):
    """Run a fixed number of PCG iterations from the iterate x and
    return the update; the Krylov space is built afresh on every call,
    which is what makes this usable as a multigrid smoother.

    Reaching the exact solution early (zero residual) returns it
    immediately.
    """
    if steps < 1:
        raise ValueError("steps must be at least 1")
    b = np.asarray(b, dtype=float)
    x = np.array(x, dtype=float)

    r = b - np.asarray(apply_A(x), dtype=float)
    if not np.any(r):
        return x
    z = apply_inverse(P, r)
    rho = float(r @ z)
    if rho <= 0.0:
        raise BreakdownError("preconditioned inner product <= 0")
    p = z.copy()

    for _ in range(steps):
        q = np.asarray(apply_A(p), dtype=float)
        curvature = float(p @ q)
        if curvature <= 0.0:
            raise BreakdownError("operator inner product <= 0")
        alpha = rho / curvature
        x = x + alpha * p
        r = r - alpha * q
        z = apply_inverse(P, r)
        rho_new = float(r @ z)
        if rho_new == 0.0:
            break
        if rho_new < 0.0:
            raise BreakdownError("preconditioned inner product <= 0")
        p = z + (rho_new / rho) * p
        rho = rho_new

    return x
