"""The preconditioner family for the distributed-order Toeplitz systems.

Five SPD preconditioners, each diagonal in a fast transform domain:
two circulants (Strang and Frobenius-optimal, FFT domain), two tau
matrices (natural and Frobenius-optimal, DST-I domain), and the
tridiagonal finite-difference Laplacian (DST-I domain, with a direct
Thomas solve as the default inverse).  All builders are scale
equivariant: coefficients scaled by alpha produce spectra scaled by
alpha, so preconditioned spectra are invariant under system rescaling.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .toeplitz import ToeplitzCoeffs, ToeplitzOperator, assemble_dense
from .transforms import dst1, fft_forward, fft_inverse

__all__ = [
    "PrecKind",
    "Preconditioner",
    "NotSPDError",
    "build_identity",
    "build_strang",
    "build_frobenius_circulant",
    "build_natural_tau",
    "build_frobenius_tau",
    "build_laplacian",
    "apply_inverse",
    "apply_inverse_sqrt",
]


class NotSPDError(ValueError):
    """A preconditioner came out not symmetric positive definite."""


class PrecKind(enum.Enum):
    IDENTITY = "identity"
    STRANG_CIRCULANT = "strang"
    FROBENIUS_CIRCULANT = "frobenius_circulant"
    NATURAL_TAU = "natural_tau"
    FROBENIUS_TAU = "frobenius_tau"
    LAPLACIAN = "laplacian"


# transform domain of each kind
_CIRCULANT = {PrecKind.STRANG_CIRCULANT, PrecKind.FROBENIUS_CIRCULANT}
_SINE = {PrecKind.NATURAL_TAU, PrecKind.FROBENIUS_TAU, PrecKind.LAPLACIAN}


@dataclass(frozen=True)
class Preconditioner:
    """Immutable preconditioner: a kind plus its transform-domain spectrum.

    Circulant kinds diagonalize under the FFT, tau kinds and the
    Laplacian under DST-I; the Identity carries an empty spectrum.
    """

    kind: PrecKind
    n: int
    spectrum: np.ndarray = field(repr=False)

    def __post_init__(self):
        s = np.asarray(self.spectrum, dtype=float)
        object.__setattr__(self, "spectrum", s)
        s.setflags(write=False)


def _checked(kind, n, spectrum):
    spectrum = np.asarray(spectrum, dtype=float)
    if np.min(spectrum) <= 0.0:
        raise NotSPDError(
            f"{kind.value} preconditioner of order {n} is not positive "
            f"definite (min transform eigenvalue {np.min(spectrum):.6e})"
        )
    return Preconditioner(kind=kind, n=n, spectrum=spectrum)


def _real_fft_spectrum(col):
    spec = fft_forward(col)
    scale = max(1.0, float(np.max(np.abs(spec.real))))
    if np.max(np.abs(spec.imag)) > 1e-10 * scale:
        raise NotSPDError("circulant first column is not symmetric")
    return spec.real


def build_identity(n):
    """No preconditioning; apply_inverse is the identity map."""
    if n < 1:
        raise ValueError("n must be positive")
    return Preconditioner(kind=PrecKind.IDENTITY, n=n, spectrum=np.empty(0))


def build_strang(c):
    """Strang circulant: copy the central diagonals and wrap them around.

    First column s[j] = a[j] for j <= n/2 and a[n-j] beyond; eigenvalues
    are the FFT of that column.  Raises NotSPDError when the wrap makes
    the circulant singular or indefinite (e.g. for the Laplacian symbol).
    """
    n = c.n
    if n < 2:
        raise ValueError("n must be at least 2")
    j = np.arange(n)
    # modular index keeps a[n - j] in range at j = 0 (both branches evaluate)
    col = np.where(j <= n // 2, c.a[j], c.a[(n - j) % n])
    return _checked(PrecKind.STRANG_CIRCULANT, n, _real_fft_spectrum(col))


def build_frobenius_circulant(c):
    """Frobenius-optimal circulant: the closest circulant in Frobenius
    norm, whose first column averages the wrapped diagonals,
    col[j] = ((n-j) a[j] + j a[n-j]) / n."""
    n = c.n
    if n < 2:
        raise ValueError("n must be at least 2")
    j = np.arange(1, n)
    col = np.empty(n)
    col[0] = c.a[0]
    col[1:] = ((n - j) * c.a[j] + j * c.a[n - j]) / n
    return _checked(PrecKind.FROBENIUS_CIRCULANT, n, _real_fft_spectrum(col))


def _natural_tau_spectrum(a):
    n = len(a)
    # d_j = a0 + 2 sum_k a_k cos(j k pi/(n+1)) via an FFT of length 2(n+1)
    w = np.zeros(2 * (n + 1))
    w[1:n] = a[1:]
    return a[0] + 2.0 * np.fft.fft(w).real[1 : n + 1]


def build_natural_tau(c):
    """Natural tau matrix: the degree-(n-1) cosine symbol sampled on the
    sine-transform grid, Q diag(d) Q with
    d_j = a0 + 2 sum_{k<n} a_k cos(j k pi/(n+1)).

    Equals the Toeplitz matrix minus its two Hankel corner corrections;
    for a tridiagonal symbol it reproduces the Toeplitz matrix exactly.
    """
    if c.n < 1:
        raise ValueError("n must be positive")
    return _checked(PrecKind.NATURAL_TAU, c.n, _natural_tau_spectrum(c.a))


def build_frobenius_tau(A):
    """Frobenius-optimal tau matrix of a symmetric matrix: since Q is
    orthogonal, the minimizer over Q diag(d) Q has d = diag(Q A Q).

    Accepts a dense symmetric matrix, or ToeplitzCoeffs in which case
    the diagonal is accumulated through fast Toeplitz products with the
    sine basis instead of dense assembly.
    """
    if isinstance(A, ToeplitzCoeffs):
        n = A.n
        op = ToeplitzOperator(A)
        j = np.arange(1, n + 1)
        d = np.empty(n)
        for i in range(n):
            q = np.sqrt(2.0 / (n + 1)) * np.sin(j * (i + 1) * np.pi / (n + 1))
            d[i] = q @ op(q)
    else:
        A = np.asarray(A, dtype=float)
        n = A.shape[0]
        if A.shape != (n, n) or not np.allclose(A, A.T, atol=1e-12 * max(1.0, np.max(np.abs(A)))):
            raise ValueError("A must be square symmetric")
        d = np.diag(dst1(dst1(A, axis=0), axis=1)).copy()
    return _checked(PrecKind.FROBENIUS_TAU, n, d)


def build_laplacian(n):
    """Tridiagonal finite-difference Laplacian tridiag(-1, 2, -1),
    diagonal in the DST-I domain with eigenvalues 2 - 2 cos(j pi/(n+1))."""
    if n < 1:
        raise ValueError("n must be positive")
    j = np.arange(1, n + 1)
    d = 2.0 - 2.0 * np.cos(j * np.pi / (n + 1))
    return Preconditioner(kind=PrecKind.LAPLACIAN, n=n, spectrum=d)


def _thomas_laplacian(b):
    """Direct tridiag(-1,2,-1) solve by Thomas elimination, O(n);
    accepts a vector or a matrix of column right-hand sides."""
    b = np.asarray(b, dtype=float)
    n = b.shape[0]
    # L D L^T factors of the constant tridiagonal are analytic: D_i = (i+1)/i
    z = np.empty_like(b)
    z[0] = b[0]
    for i in range(1, n):
        z[i] = b[i] + (i / (i + 1.0)) * z[i - 1]
    x = np.empty_like(b)
    x[n - 1] = z[n - 1] * (n / (n + 1.0))
    for i in range(n - 2, -1, -1):
        x[i] = ((i + 1.0) / (i + 2.0)) * (z[i] + x[i + 1])
    return x


def _check_len(P, x):
    x = np.asarray(x, dtype=float)
    if x.shape[0] != P.n:
        raise ValueError("vector length must match preconditioner order")
    return x


def _divide_in_transform(P, x, denom):
    """x -> T^{-1} diag(1/denom) T x for P's diagonalizing transform T,
    acting on the leading axis."""
    denom = denom.reshape(denom.shape + (1,) * (x.ndim - 1))
    if P.kind in _CIRCULANT:
        spec = fft_forward(x.T).T / denom
        return np.real(fft_inverse(spec.T).T)
    return dst1(dst1(x, axis=0) / denom, axis=0)


def apply_inverse(P, x, route=None):
    """Apply P^{-1} through the diagonalizing transform (or, for the
    Laplacian, a direct Thomas solve).

    x may be a vector or a matrix whose columns are transformed.  For
    the Laplacian, route="direct" (default) uses Thomas elimination and
    route="spectral" the DST path; they agree to 1e-11.
    """
    x = _check_len(P, x)
    if P.kind is PrecKind.IDENTITY:
        return x.copy()
    if P.kind is PrecKind.LAPLACIAN:
        if route in (None, "direct"):
            return _thomas_laplacian(x)
        if route != "spectral":
            raise ValueError(f"unknown route {route!r}")
    elif route is not None and route != "spectral":
        raise ValueError(f"route {route!r} only applies to the Laplacian")
    return _divide_in_transform(P, x, P.spectrum)


def apply_inverse_sqrt(P, x):
    """Apply P^{-1/2} in the transform domain (divide by sqrt of the
    spectrum); used to form symmetrized preconditioned matrices."""
    x = _check_len(P, x)
    if P.kind is PrecKind.IDENTITY:
        return x.copy()
    return _divide_in_transform(P, x, np.sqrt(P.spectrum))
