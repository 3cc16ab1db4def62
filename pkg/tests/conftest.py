"""Shared fixtures: cached coefficient sequences, scaled dense matrices,
and preconditioned spectra, so the expensive builds happen once per run.

Reference data for the published experiment tables lives here too; the
individual test modules and the acceptance suite both draw on it.
"""

import functools

import numpy as np
import pytest

from dofde import (
    PrecKind,
    ToeplitzCoeffs,
    assemble_dense,
    build_frobenius_circulant,
    build_frobenius_tau,
    build_identity,
    build_laplacian,
    build_natural_tau,
    build_strang,
    coeffs_via_fft,
    preconditioned_spectrum,
)


@functools.lru_cache(maxsize=None)
def coeffs(n):
    return coeffs_via_fft(n)


@functools.lru_cache(maxsize=None)
def scaled_coeffs(n):
    c = coeffs(n)
    return ToeplitzCoeffs(n, c.a / n)


@functools.lru_cache(maxsize=None)
def dense_scaled(n):
    A = assemble_dense(scaled_coeffs(n))
    A.setflags(write=False)
    return A


@functools.lru_cache(maxsize=None)
def dense_unscaled(n):
    A = assemble_dense(coeffs(n))
    A.setflags(write=False)
    return A


def build_prec(kind, n):
    scaled = scaled_coeffs(n)
    builders = {
        PrecKind.IDENTITY: lambda: build_identity(n),
        PrecKind.STRANG_CIRCULANT: lambda: build_strang(scaled),
        PrecKind.FROBENIUS_CIRCULANT: lambda: build_frobenius_circulant(scaled),
        PrecKind.NATURAL_TAU: lambda: build_natural_tau(scaled),
        PrecKind.FROBENIUS_TAU: lambda: build_frobenius_tau(np.asarray(dense_scaled(n))),
        PrecKind.LAPLACIAN: lambda: build_laplacian(n),
    }
    return builders[kind]()


@functools.lru_cache(maxsize=None)
def prec_spectrum(kind, n):
    return preconditioned_spectrum(np.asarray(dense_scaled(n)), build_prec(kind, n))


@pytest.fixture(scope="session")
def cache():
    """Namespace handle for the cached builders above."""

    class _Cache:
        coeffs = staticmethod(coeffs)
        scaled_coeffs = staticmethod(scaled_coeffs)
        dense_scaled = staticmethod(dense_scaled)
        dense_unscaled = staticmethod(dense_unscaled)
        build_prec = staticmethod(build_prec)
        prec_spectrum = staticmethod(prec_spectrum)

    return _Cache


# ---------------------------------------------------------------------------
# published reference values (the experiment tables)

TABLE_SIZES = (32, 64, 128, 256, 512, 1024, 2048)

# iteration counts: columns identity, strang, frobenius_circulant,
# natural_tau, frobenius_tau, laplacian
PCG_TABLE = {
    32: (34, 7, 11, 6, 5, 8),
    64: (73, 8, 14, 5, 5, 9),
    128: (154, 8, 15, 5, 5, 10),
    256: (307, 8, 18, 5, 5, 10),
    512: (593, 8, 22, 5, 5, 11),
    1024: (1095, 8, 27, 5, 5, 11),
    2048: (2112, 8, 34, 5, 5, 12),
}

# circulant extreme eigenvalues: (strang min, max, frobenius min, max)
CIRCULANT_EXTREMES = {
    32: (5.2258e-1, 3.4325e1, 1.7524e-1, 4.1234),
    64: (5.1302e-1, 5.4268e1, 1.1034e-1, 5.6639),
    128: (5.0743e-1, 9.1152e1, 6.6754e-2, 7.8412),
    256: (5.0419e-1, 1.5814e2, 3.9098e-2, 1.0911e1),
    512: (5.0234e-1, 2.8003e2, 2.2338e-2, 1.5232e1),
    1024: (5.0129e-1, 5.0319e2, 1.2526e-2, 2.1315e1),
    2048: (5.0071e-1, 9.1428e2, 6.9259e-3, 2.9876e1),
}

# sine-transform extreme eigenvalues: (natural min, max, frobenius min, max)
TAU_EXTREMES = {
    32: (8.1574e-1, 1.1475, 9.3206e-1, 1.1356),
    64: (8.0608e-1, 1.1527, 9.0938e-1, 1.1463),
    128: (7.9895e-1, 1.1584, 8.8984e-1, 1.1551),
    256: (7.9396e-1, 1.1641, 8.7441e-1, 1.1624),
    512: (7.9063e-1, 1.1693, 8.6271e-1, 1.1685),
    1024: (7.8851e-1, 1.1742, 8.5401e-1, 1.1737),
    2048: (7.8727e-1, 1.1785, 8.4763e-1, 1.1783),
}

# Laplacian-preconditioned extremes (scaled matrix against unscaled stencil)
LAPLACIAN_EXTREMES = {
    32: (3.1941e-1, 5.4802e-1),
    64: (2.6529e-1, 5.3509e-1),
    128: (2.2651e-1, 5.2979e-1),
    256: (1.9750e-1, 5.2727e-1),
    512: (1.7504e-1, 5.2604e-1),
    1024: (1.5713e-1, 5.2543e-1),
    2048: (1.4252e-1, 5.2513e-1),
}

# outlier counts (left, right) at eps 1e-1 and 1e-2
NATURAL_TAU_OUTLIERS = {
    32: ((1, 2), (3, 4)),
    64: ((1, 2), (3, 4)),
    128: ((1, 2), (4, 4)),
    256: ((2, 2), (5, 4)),
    512: ((2, 2), (5, 4)),
    1024: ((2, 2), (5, 4)),
    2048: ((2, 2), (6, 4)),
}

FROBENIUS_TAU_OUTLIERS = {
    32: ((0, 2), (18, 4)),
    64: ((0, 2), (2, 6)),
    128: ((1, 2), (2, 9)),
    256: ((1, 2), (3, 10)),
    512: ((2, 2), (4, 10)),
    1024: ((2, 2), (4, 10)),
    2048: ((2, 2), (4, 10)),
}

MGM_SIZES = (31, 63, 127, 255, 511, 1023, 2047)

# multigrid iteration counts per case (TGM and V-cycle columns coincide)
MGM_TABLE = {
    31: {"alpha": 9, "beta": 4, "gamma": 3, "delta": 2},
    63: {"alpha": 10, "beta": 4, "gamma": 3, "delta": 2},
    127: {"alpha": 11, "beta": 4, "gamma": 3, "delta": 2},
    255: {"alpha": 11, "beta": 4, "gamma": 3, "delta": 2},
    511: {"alpha": 11, "beta": 3, "gamma": 3, "delta": 2},
    1023: {"alpha": 11, "beta": 4, "gamma": 3, "delta": 2},
    2047: {"alpha": 11, "beta": 3, "gamma": 3, "delta": 2},
}
