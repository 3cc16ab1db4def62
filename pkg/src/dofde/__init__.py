"""Distributed-order stiffness matrices: symbols, eigenvalue bounds,
preconditioned solvers, and the experiment runner."""

from .symbols import (
    SingularityError,
    bound_correction,
    bound_correction_coeffs,
    dist_order_symbol,
    fold_angle,
    laplacian_eigenfunction,
    laplacian_symbol,
    limit_symbol,
    rescaled_remainder,
)
from .quadrature import (
    BoundConstants,
    QuadResult,
    QuadratureConvergenceError,
    compute_bound_constants,
    integrate_adaptive,
    lower_bound_constant,
    norm_constant,
    norm_constant_limit,
    upper_bound_constant,
)
from .transforms import dst1, fft_forward, fft_inverse
from .toeplitz import (
    CoeffStabilizationError,
    ToeplitzCoeffs,
    ToeplitzOperator,
    assemble_dense,
    coeff_oracle,
    coeffs_via_fft,
    toeplitz_matvec,
)
from .preconditioners import (
    NotSPDError,
    PrecKind,
    Preconditioner,
    apply_inverse,
    apply_inverse_sqrt,
    build_frobenius_circulant,
    build_frobenius_tau,
    build_identity,
    build_laplacian,
    build_natural_tau,
    build_strang,
)
from .krylov import BreakdownError, SolveReport, StoppingRule, cg_smooth_step, pcg
from .multigrid import (
    CaseTag,
    Hierarchy,
    MgmCase,
    build_hierarchy,
    build_restriction,
    case_alpha,
    case_beta,
    case_delta,
    case_finest_only,
    case_gamma,
    gauss_seidel_sweep,
    tgm,
    vcycle,
)
from .spectral import (
    OutlierReport,
    SpectrumReport,
    count_outliers,
    dense_sym_eigs,
    lanczos_extremes,
    min_eig_normalized,
    preconditioned_spectrum,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "SingularityError",
    "dist_order_symbol",
    "limit_symbol",
    "rescaled_remainder",
    "laplacian_symbol",
    "laplacian_eigenfunction",
    "fold_angle",
    "bound_correction",
    "bound_correction_coeffs",
    "QuadResult",
    "BoundConstants",
    "QuadratureConvergenceError",
    "integrate_adaptive",
    "lower_bound_constant",
    "upper_bound_constant",
    "norm_constant",
    "norm_constant_limit",
    "compute_bound_constants",
    "fft_forward",
    "fft_inverse",
    "dst1",
    "ToeplitzCoeffs",
    "ToeplitzOperator",
    "CoeffStabilizationError",
    "coeffs_via_fft",
    "coeff_oracle",
    "assemble_dense",
    "toeplitz_matvec",
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
    "StoppingRule",
    "SolveReport",
    "BreakdownError",
    "pcg",
    "cg_smooth_step",
    "CaseTag",
    "MgmCase",
    "Hierarchy",
    "build_restriction",
    "build_hierarchy",
    "gauss_seidel_sweep",
    "vcycle",
    "tgm",
    "case_alpha",
    "case_beta",
    "case_gamma",
    "case_delta",
    "case_finest_only",
    "SpectrumReport",
    "OutlierReport",
    "dense_sym_eigs",
    "lanczos_extremes",
    "min_eig_normalized",
    "preconditioned_spectrum",
    "count_outliers",
]
