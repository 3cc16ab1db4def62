"""Experiment runner.

Every experiment in the study is reachable from here: the bound
constants, the eigenfunction normalization sequence, the normalized
minimum eigenvalues, the stiffness coefficients, the five-way PCG
comparison, preconditioned spectra, outlier counts, and the multigrid
cases.  Output is deterministic CSV (or JSON with extra diagnostics),
one file per experiment when a directory is given, stdout otherwise.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from .krylov import StoppingRule, pcg
from .multigrid import (
    MgmCase,
    build_hierarchy,
    case_alpha,
    case_beta,
    case_delta,
    case_finest_only,
    case_gamma,
    tgm,
    vcycle,
)
from .preconditioners import (
    NotSPDError,
    PrecKind,
    build_frobenius_circulant,
    build_frobenius_tau,
    build_identity,
    build_laplacian,
    build_natural_tau,
    build_strang,
)
from .quadrature import (
    lower_bound_constant,
    norm_constant,
    norm_constant_limit,
    upper_bound_constant,
)
from .spectral import count_outliers, dense_sym_eigs, min_eig_normalized, preconditioned_spectrum
from .toeplitz import ToeplitzCoeffs, ToeplitzOperator, assemble_dense, coeffs_via_fft

__all__ = ["RunConfig", "CliError", "parse_sizes", "run", "main"]

_COMMANDS = ("bounds", "cn", "mineig", "coeffs", "pcg", "spectrum", "outliers", "mgm", "all")

_DEFAULT_SIZES = {
    "cn": "8..4096",
    "mineig": "16..2048",
    "coeffs": "32..2048",
    "pcg": "32..2048",
    "spectrum": "32..2048",
    "outliers": "32..2048",
    "mgm": "31..2047",
}

_DEFAULT_PRECS = {
    "pcg": [
        PrecKind.IDENTITY,
        PrecKind.STRANG_CIRCULANT,
        PrecKind.FROBENIUS_CIRCULANT,
        PrecKind.NATURAL_TAU,
        PrecKind.FROBENIUS_TAU,
        PrecKind.LAPLACIAN,
    ],
    "spectrum": [
        PrecKind.STRANG_CIRCULANT,
        PrecKind.FROBENIUS_CIRCULANT,
        PrecKind.NATURAL_TAU,
        PrecKind.FROBENIUS_TAU,
        PrecKind.LAPLACIAN,
    ],
    "outliers": [PrecKind.NATURAL_TAU, PrecKind.FROBENIUS_TAU],
}

_CASE_FACTORIES = {
    "alpha": case_alpha,
    "beta": case_beta,
    "gamma": case_gamma,
    "delta": case_delta,
    "finest_only": case_finest_only,
}


class CliError(ValueError):
    """Configuration problem that should surface as a nonzero exit."""


@dataclass
class RunConfig:
    command: str
    sizes: list = field(default_factory=list)
    preconditioners: list = field(default_factory=list)
    eps: list = field(default_factory=lambda: [1e-1, 1e-2])
    case: MgmCase | None = None
    tol: float = 1e-7
    quad_tol: float = 1e-8
    output_path: str | None = None
    format: str = "csv"


def parse_sizes(text):
    """Parse a size list: comma-separated integers, or `a..b` which
    doubles from a power of two (32..2048) and follows n -> 2n+1 from
    a power-of-two-minus-one start (31..2047)."""
    text = text.strip()
    if ".." in text:
        lo_text, _, hi_text = text.partition("..")
        lo, hi = int(lo_text), int(hi_text)
        if lo < 2 or hi < lo:
            raise CliError(f"bad size range {text!r}")
        if lo & (lo - 1) == 0:
            step = lambda m: 2 * m
        elif (lo + 1) & lo == 0:
            step = lambda m: 2 * m + 1
        else:
            raise CliError(
                f"range start {lo} must be a power of two or one less than one"
            )
        sizes = []
        m = lo
        while m <= hi:
            sizes.append(m)
            m = step(m)
        if not sizes:
            raise CliError(f"empty size range {text!r}")
        return sizes
    try:
        sizes = [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise CliError(f"bad size list {text!r}") from exc
    if not sizes or any(s < 1 for s in sizes):
        raise CliError(f"sizes must be positive: {text!r}")
    return sizes


def _parse_precs(text):
    if text.strip() == "all":
        return list(PrecKind)
    out = []
    valid = {k.value: k for k in PrecKind}
    for tok in text.split(","):
        tok = tok.strip()
        if tok not in valid:
            raise CliError(f"unknown preconditioner {tok!r}")
        out.append(valid[tok])
    return out


def _fmt(x):
    return "%.10e" % float(x)


def _scaled_coeffs(n, tol):
    c = coeffs_via_fft(n, stabilization_tol=tol)
    return ToeplitzCoeffs(n, c.a / n)


def _build_preconditioner(kind, scaled, dense=None):
    n = scaled.n
    if kind is PrecKind.IDENTITY:
        return build_identity(n)
    if kind is PrecKind.STRANG_CIRCULANT:
        return build_strang(scaled)
    if kind is PrecKind.FROBENIUS_CIRCULANT:
        return build_frobenius_circulant(scaled)
    if kind is PrecKind.NATURAL_TAU:
        return build_natural_tau(scaled)
    if kind is PrecKind.FROBENIUS_TAU:
        return build_frobenius_tau(dense if dense is not None else scaled)
    if kind is PrecKind.LAPLACIAN:
        return build_laplacian(n)
    raise CliError(f"unknown preconditioner kind {kind!r}")


# ---------------------------------------------------------------------------
# command implementations: each returns (columns, rows, extras)

def _cmd_bounds(config):
    upper = upper_bound_constant(tol=config.quad_tol, detail=True)
    lower = lower_bound_constant(tol=max(config.quad_tol, 1e-12), detail=True)
    limit = norm_constant_limit(tol=config.quad_tol, detail=True)
    rows = [
        ["k1", _fmt(upper.value), _fmt(upper.abs_error_estimate)],
        ["k2", _fmt(lower.value), _fmt(lower.abs_error_estimate)],
        ["c_infinity", _fmt(limit.value), _fmt(limit.abs_error_estimate)],
    ]
    extras = {"evaluations": {
        "k1": upper.evaluations,
        "k2": lower.evaluations,
        "c_infinity": limit.evaluations,
    }}
    summary = ", ".join(f"{name}={float(val):.4f}" for name, val, _ in rows)
    return ["constant", "value", "error_estimate"], rows, extras, summary


def _cmd_cn(config):
    rows = []
    for n in config.sizes:
        rows.append([str(n), _fmt(norm_constant(n, tol=config.quad_tol))])
    return ["n", "c_n"], rows, {}


def _cmd_mineig(config):
    upper = upper_bound_constant(tol=config.quad_tol)
    lower = lower_bound_constant(tol=max(config.quad_tol, 1e-12))
    rows = []
    for n in config.sizes:
        if n < 4:
            raise CliError(f"mineig needs n >= 4, got {n}")
        rows.append([str(n), _fmt(min_eig_normalized(n)), _fmt(lower), _fmt(upper)])
    return ["n", "normalized_min_eig", "k2", "k1"], rows, {}


def _cmd_coeffs(config):
    rows = []
    for n in config.sizes:
        c = coeffs_via_fft(n)
        for k in range(n):
            rows.append([str(n), str(k), _fmt(c.a[k])])
    return ["n", "k", "coefficient"], rows, {}


def _cmd_pcg(config):
    precs = config.preconditioners or _DEFAULT_PRECS["pcg"]
    columns = ["n"] + [k.value for k in precs]
    rows = []
    histories = {}
    for n in config.sizes:
        if n < 2:
            raise CliError(f"pcg needs n >= 2, got {n}")
        scaled = _scaled_coeffs(n, 1e-10)
        op = ToeplitzOperator(scaled)
        b = np.ones(n)
        stop = StoppingRule(tol=config.tol)
        row = [str(n)]
        for kind in precs:
            P = _build_preconditioner(kind, scaled)
            report = pcg(op, P, b, stop=stop)
            row.append(str(report.iterations))
            histories[f"n={n},{kind.value}"] = [float(r) for r in report.residual_history]
        rows.append(row)
    return columns, rows, {"residual_histories": histories}


def _cmd_spectrum(config):
    precs = config.preconditioners or _DEFAULT_PRECS["spectrum"]
    rows = []
    for n in config.sizes:
        scaled = _scaled_coeffs(n, 1e-10)
        A = assemble_dense(scaled)
        for kind in precs:
            P = _build_preconditioner(kind, scaled, dense=A)
            s = preconditioned_spectrum(A, P)
            rows.append([str(n), kind.value, _fmt(s.lambda_min), _fmt(s.lambda_max)])
    return ["n", "preconditioner", "lambda_min", "lambda_max"], rows, {}


def _cmd_outliers(config):
    precs = config.preconditioners or _DEFAULT_PRECS["outliers"]
    rows = []
    for n in config.sizes:
        scaled = _scaled_coeffs(n, 1e-10)
        A = assemble_dense(scaled)
        for kind in precs:
            P = _build_preconditioner(kind, scaled, dense=A)
            s = preconditioned_spectrum(A, P)
            for eps in config.eps:
                rep = count_outliers(s, eps)
                rows.append([
                    str(n), kind.value, _fmt(eps),
                    str(rep.n_out_left), str(rep.n_out_right), _fmt(rep.percent),
                ])
    return ["n", "preconditioner", "eps", "n_out_left", "n_out_right", "percent"], rows, {}


def _cmd_mgm(config):
    cases = ([(config.case.tag.value, config.case)] if config.case is not None
             else [(name, factory()) for name, factory in _CASE_FACTORIES.items()])
    rows = []
    for n in config.sizes:
        if (n + 1) & n or n < 3:
            raise CliError(f"mgm needs sizes one less than a power of two, got {n}")
        scaled = _scaled_coeffs(n, 1e-10)
        A = assemble_dense(scaled)
        h_two = build_hierarchy(A, coarsest_threshold=max((n - 1) // 2, 1))
        h_full = build_hierarchy(A)
        b = np.ones(n)
        stop = StoppingRule(tol=config.tol)
        for name, case in cases:
            t = tgm(h_two, case, b, stop=stop)
            v = vcycle(h_full, case, b, stop=stop)
            rows.append([str(n), name, str(t.iterations), str(v.iterations)])
    return ["n", "case", "tgm_iterations", "vcycle_iterations"], rows, {}


_RUNNERS = {
    "cn": _cmd_cn,
    "mineig": _cmd_mineig,
    "coeffs": _cmd_coeffs,
    "pcg": _cmd_pcg,
    "spectrum": _cmd_spectrum,
    "outliers": _cmd_outliers,
    "mgm": _cmd_mgm,
}


def _csv_text(columns, rows):
    lines = [",".join(columns)]
    lines.extend(",".join(row) for row in rows)
    return "\n".join(lines) + "\n"


def _json_text(command, columns, rows, extras, wall_time):
    payload = {
        "command": command,
        "columns": columns,
        "rows": rows,
        "wall_time_seconds": wall_time,
    }
    payload.update(extras)
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _emit(config, command, columns, rows, extras, wall_time, out_dir=None):
    directory = out_dir or config.output_path
    if config.format == "json":
        text = _json_text(command, columns, rows, extras, wall_time)
        suffix = ".json"
    else:
        text = _csv_text(columns, rows)
        suffix = ".csv"
    if directory is None:
        sys.stdout.write(text)
        return
    import os

    os.makedirs(directory, exist_ok=True)
    path = os.path.join(directory, command + suffix)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _default_sizes(command):
    expr = _DEFAULT_SIZES.get(command)
    return parse_sizes(expr) if expr else []


def _run_one(config, command):
    cfg_sizes = config.sizes or _default_sizes(command)
    sub = RunConfig(
        command=command,
        sizes=cfg_sizes,
        preconditioners=config.preconditioners,
        eps=config.eps,
        case=config.case,
        tol=config.tol,
        quad_tol=config.quad_tol,
        output_path=config.output_path,
        format=config.format,
    )
    start = time.perf_counter()
    if command == "bounds":
        columns, rows, extras, summary = _cmd_bounds(sub)
        wall = time.perf_counter() - start
        if sub.output_path is None and sub.format == "csv":
            sys.stdout.write(summary + "\n")
        _emit(sub, "bounds", columns, rows, extras, wall)
        return
    columns, rows, extras = _RUNNERS[command](sub)
    wall = time.perf_counter() - start
    _emit(sub, command, columns, rows, extras, wall)


def run(config):
    """Execute one configured command; returns a process exit status."""
    try:
        if config.command not in _COMMANDS:
            raise CliError(f"unknown command {config.command!r}")
        if config.format not in ("csv", "json"):
            raise CliError(f"unknown format {config.format!r}")
        if config.command == "all":
            if not config.output_path:
                raise CliError("'all' needs --out DIR")
            for command in _COMMANDS[:-1]:
                base = RunConfig(
                    command=command,
                    preconditioners=config.preconditioners,
                    eps=config.eps,
                    case=config.case,
                    tol=config.tol,
                    quad_tol=config.quad_tol,
                    output_path=config.output_path,
                    format=config.format,
                )
                _run_one(base, command)
        else:
            _run_one(config, config.command)
    except NotSPDError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (CliError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="dofde",
        description="Distributed-order stiffness matrices: bounds, spectra, solvers.",
    )
    parser.add_argument("command", choices=_COMMANDS)
    parser.add_argument("--sizes", help="comma list or a..b range (32..2048, 31..2047)")
    parser.add_argument("--precs", help="comma list of preconditioner names, or 'all'")
    parser.add_argument("--eps", help="comma list of outlier half-widths", default="1e-1,1e-2")
    parser.add_argument("--case", choices=sorted(_CASE_FACTORIES) + ["all"], default="all")
    parser.add_argument("--tol", type=float, default=1e-7, help="solver stopping tolerance")
    parser.add_argument("--quad-tol", type=float, default=1e-8, help="quadrature tolerance")
    parser.add_argument("--seed", type=int, default=0,
                        help="reserved; experiments use a deterministic right-hand side")
    parser.add_argument("--out", help="output directory (required for 'all')")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    args = parser.parse_args(argv)

    try:
        sizes = parse_sizes(args.sizes) if args.sizes else []
        precs = _parse_precs(args.precs) if args.precs else []
        eps = [float(tok) for tok in args.eps.split(",") if tok.strip()]
        if any(e <= 0 for e in eps):
            raise CliError("eps values must be positive")
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    case = None if args.case == "all" else _CASE_FACTORIES[args.case]()
    config = RunConfig(
        command=args.command,
        sizes=sizes,
        preconditioners=precs,
        eps=eps,
        case=case,
        tol=args.tol,
        quad_tol=args.quad_tol,
        output_path=args.out,
        format=args.format,
    )
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
