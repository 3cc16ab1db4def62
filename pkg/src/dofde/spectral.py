"""Eigenvalue machinery for the bound checks and the spectrum tables.

Dense symmetric spectra are the authoritative path for every tabulated
quantity; a fully reorthogonalized Lanczos sweep is available as a
matrix-free cross-check of the extremes.  Preconditioned spectra are
formed symmetrically as P^(-1/2) A P^(-1/2), which shares eigenvalues
with P^(-1) A.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .preconditioners import apply_inverse_sqrt
from .toeplitz import assemble_dense, coeffs_via_fft

__all__ = [
    "SpectrumReport",
    "OutlierReport",
    "dense_sym_eigs",
    "lanczos_extremes",
    "min_eig_normalized",
    "preconditioned_spectrum",
    "count_outliers",
]

_LANCZOS_SEED = 20090213
_SYMMETRY_RTOL = 1e-10


@dataclass(frozen=True)
class SpectrumReport:
    """Ascending eigenvalues with the extremes broken out."""

    eigenvalues: np.ndarray = field(repr=False)
    lambda_min: float
    lambda_max: float


@dataclass(frozen=True)
class OutlierReport:
    """Eigenvalues outside (1-eps, 1+eps), split by side."""

    n_out_left: int
    n_out_right: int
    percent: float


def _check_symmetric(A):
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("matrix must be square")
    scale = np.abs(A).max() or 1.0
    if np.abs(A - A.T).max() > _SYMMETRY_RTOL * scale:
        raise ValueError("matrix must be symmetric")
    return A


def dense_sym_eigs(A):
    """Full spectrum of a symmetric matrix, sorted ascending.

    Householder tridiagonalization plus the implicitly shifted
    tridiagonal QL/QR iteration, as provided by LAPACK's symmetric
    driver; non-convergence surfaces as LinAlgError.
    """
    A = _check_symmetric(A)
    w = np.linalg.eigvalsh(A)
    return SpectrumReport(w, float(w[0]), float(w[-1]))


def lanczos_extremes(apply_A, n, iters):
    """Ritz estimates (lambda_min_est, lambda_max_est) after `iters`
    Lanczos steps with full reorthogonalization and a fixed seeded
    start vector.  Early breakdown (an invariant subspace was hit)
    returns the Ritz values found so far.  For ill-conditioned input
    the minimum estimate is an upper bound on the true minimum.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if iters < 1:
        raise ValueError("iters must be positive")
    iters = min(iters, n)

    rng = np.random.default_rng(_LANCZOS_SEED)
    v = rng.standard_normal(n)
    v /= np.linalg.norm(v)

    basis = np.empty((iters, n))
    basis[0] = v
    alphas = []
    betas = []
    scale = None
    for j in range(iters):
        w = np.asarray(apply_A(basis[j]), dtype=float)
        alpha = float(basis[j] @ w)
        alphas.append(alpha)
        if scale is None:
            scale = max(abs(alpha), 1.0)
        w -= alpha * basis[j]
        if j > 0:
            w -= betas[-1] * basis[j - 1]
        # full reorthogonalization against every stored vector
        active = basis[: j + 1]
        w -= active.T @ (active @ w)
        beta = np.linalg.norm(w)
        if j == iters - 1:
            break
        if beta <= 1e-12 * scale:
            break
        betas.append(beta)
        basis[j + 1] = w / beta

    ritz = eigh_tridiagonal(np.array(alphas), np.array(betas),
                            eigvals_only=True)
    return float(ritz[0]), float(ritz[-1])


def min_eig_normalized(n, stabilization_tol=1e-10):
    """n times the smallest eigenvalue of the order-n stiffness matrix,
    computed along the dense path."""
    if n < 4:
        raise ValueError("n must be at least 4")
    A = assemble_dense(coeffs_via_fft(n, stabilization_tol=stabilization_tol))
    return n * dense_sym_eigs(A).lambda_min


def preconditioned_spectrum(A, P):
    """Spectrum of P^(-1/2) A P^(-1/2), which matches that of P^(-1) A.

    The inverse square root is applied to A's columns and then to its
    rows, and the result is symmetrized before the dense eigensolve.
    """
    A = _check_symmetric(A)
    half = apply_inverse_sqrt(P, A)
    full = apply_inverse_sqrt(P, half.T)
    return dense_sym_eigs(0.5 * (full + full.T))


def count_outliers(s, eps):
    """Count eigenvalues at or outside the open interval (1-eps, 1+eps);
    percent is relative to the matrix order."""
    if eps <= 0.0:
        raise ValueError("eps must be positive")
    w = s.eigenvalues
    left = int(np.count_nonzero(w <= 1.0 - eps))
    right = int(np.count_nonzero(w >= 1.0 + eps))
    return OutlierReport(left, right, 100.0 * (left + right) / w.shape[0])
