"""Command-line interface.

Subcommands: ``spectrum``, ``oscillator``, ``verify``, ``bench`` and
``random``.  Exit codes:

    0  success
    1  verification failed (``verify`` only)
    2  parse or validation error (bad flags, malformed or non-symmetric matrix)
    3  breakdown (isotropic Householder vector or rotation)
    4  no convergence
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .bench import bench_csv, fit_exponents, matrix_digest, random_csmatrix, run_bench
from .errors import BreakdownError, NoConvergence
from .fileio import SpectrumReport, format_matrix, read_matrix, read_report, wavefunction_csv, write_matrix
from .oscillator import OscillatorModel, build_hamiltonian, lowest_level_indices, wavefunction_samples
from .tql import ConvergenceOptions, eigen

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_BREAKDOWN = 3
EXIT_NO_CONVERGENCE = 4

SAMPLE_GRID = (-6.0, 6.0, 601)
PRECISIONS = {"double": np.complex128, "extended": np.clongdouble}


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {text}")
    return value


def _size_list(text):
    try:
        sizes = [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not sizes or min(sizes) < 2:
        raise argparse.ArgumentTypeError("sizes must be integers >= 2")
    return sizes


def _add_solver_flags(p):
    p.add_argument("--direction", choices=("ql", "qr"), default="ql",
                   help="bulge-chasing direction (default: ql)")
    p.add_argument("--tol", type=float, default=None,
                   help="relative deflation tolerance (default: machine epsilon)")
    p.add_argument("--max-sweeps", type=_positive_int, default=50,
                   help="sweep budget per eigenvalue (default: 50)")
    p.add_argument("--retry-breakdown", action="store_true",
                   help="retry a sweep with a slightly perturbed shift after a rotation breakdown")
    p.add_argument("--precision", choices=tuple(PRECISIONS), default="double",
                   help="working precision (extended = long double where the platform has it)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--output", "-o", type=Path, default=None,
                   help="write the report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cseig", description="Complex symmetric eigensolver.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="eigenvalues of a matrix file")
    p.add_argument("matrix", type=Path)
    p.add_argument("--vectors", action="store_true", help="also compute eigenvectors")
    _add_solver_flags(p)

    p = sub.add_parser("oscillator", help="lowest levels of an anharmonic oscillator")
    p.add_argument("--model", choices=("icubic", "ccubic", "quartic"), required=True)
    p.add_argument("--coupling", type=float, default=1.0)
    p.add_argument("--theta", type=float, default=0.30,
                   help="complex scaling angle for ccubic, 0 < theta < pi/5 (default: 0.30)")
    p.add_argument("--basis", type=int, default=128, help="number of basis states N")
    p.add_argument("--levels", type=_positive_int, default=2)
    p.add_argument("--samples", type=Path, default=None,
                   help="write wavefunction samples of the reported states to this CSV")
    _add_solver_flags(p)

    p = sub.add_parser("verify", help="recheck eigenpairs of a report against a matrix")
    p.add_argument("matrix", type=Path)
    p.add_argument("report", type=Path)
    p.add_argument("--tol", type=float, default=1e-10)

    p = sub.add_parser("bench", help="time tridiagonalization and QL on random matrices")
    p.add_argument("--sizes", type=_size_list, default=[100, 200, 400])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=_positive_int, default=3)
    p.add_argument("--output", "-o", type=Path, default=None)

    p = sub.add_parser("random", help="write a seeded random complex symmetric matrix file")
    p.add_argument("n", type=_positive_int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", "-o", type=Path, default=None)
    return parser


def _emit(text, path):
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _options(args, vectors):
    return ConvergenceOptions(tol=args.tol, max_sweeps=args.max_sweeps, direction=args.direction,
                              vectors=vectors, retry_breakdown=args.retry_breakdown)


def _options_echo(opts, precision):
    return {"direction": opts.direction, "tol": opts.tol, "max_sweeps": opts.max_sweeps,
            "vectors": opts.vectors, "retry_breakdown": opts.retry_breakdown,
            "precision": precision}


def _render(report, fmt):
    return report.to_json() + "\n" if fmt == "json" else report.to_csv()


def cmd_spectrum(args) -> int:
    A = read_matrix(args.matrix)
    opts = _options(args, args.vectors)
    t0 = time.perf_counter()
    spectrum = eigen(A.astype(PRECISIONS[args.precision]), opts)
    wall = time.perf_counter() - t0
    report = SpectrumReport.from_spectrum(spectrum, _options_echo(opts, args.precision), wall,
                                          args.precision)
    _emit(_render(report, args.format), args.output)
    return EXIT_OK


def cmd_oscillator(args) -> int:
    model = OscillatorModel(args.model, args.coupling, args.basis,
                            args.theta if args.model == "ccubic" else None)
    if args.levels > model.basis_size:
        raise ValueError(f"--levels {args.levels} exceeds the basis size {model.basis_size}")
    want_vectors = args.samples is not None
    opts = _options(args, want_vectors)
    t0 = time.perf_counter()
    H = build_hamiltonian(model).astype(PRECISIONS[args.precision])
    spectrum = eigen(H, opts)
    wall = time.perf_counter() - t0

    index = lowest_level_indices(spectrum.eigenvalues, args.levels)
    levels = spectrum.eigenvalues[index]
    echo = _options_echo(opts, args.precision)
    echo.update(model=model.kind, coupling=model.coupling, basis=model.basis_size,
                theta=model.theta, levels=args.levels)
    report = SpectrumReport(
        eigenvalues=[complex(z) for z in levels],
        sweeps=[spectrum.sweeps[i] for i in index],
        partitions=spectrum.partitions,
        max_residual=spectrum.max_residual,
        options=echo,
        wall_seconds=wall,
        precision=args.precision,
    )
    _emit(_render(report, args.format), args.output)

    if want_vectors:
        xs = np.linspace(*SAMPLE_GRID)
        rows = []
        for k, i in enumerate(index):
            coeffs = np.asarray(spectrum.eigenvectors[:, i], dtype=complex)
            rows.extend((k, s) for s in wavefunction_samples(coeffs, xs))
        Path(args.samples).write_text(wavefunction_csv(rows))
    return EXIT_OK


def cmd_verify(args) -> int:
    A = read_matrix(args.matrix)
    report = read_report(args.report)
    if report.eigenvectors is None:
        raise ValueError("report has no eigenvectors; rerun spectrum with --vectors")
    X = report.eigenvectors
    lam = np.asarray(report.eigenvalues, dtype=complex)
    if X.shape != (A.shape[0], lam.size):
        raise ValueError(f"shape mismatch: matrix order {A.shape[0]}, "
                         f"eigenvectors {X.shape}, {lam.size} eigenvalues")
    norm = np.linalg.norm(A)
    res = np.linalg.norm(A @ X - X * lam[None, :], axis=0)
    if norm > 0:
        res = res / norm
    bad = np.flatnonzero(res > args.tol)
    for j in bad:
        print(f"pair {j}: residual {res[j]:.3e} exceeds {args.tol:g}")
    worst = float(res.max()) if res.size else 0.0
    status = "FAIL" if bad.size else "PASS"
    print(f"{status}: {lam.size} pairs, max residual {worst:.3e}, tol {args.tol:g}")
    return EXIT_VERIFY_FAILED if bad.size else EXIT_OK


def cmd_bench(args) -> int:
    rows = run_bench(args.sizes, args.seed, args.trials)
    _emit(bench_csv(rows, fit_exponents(rows)), args.output)
    return EXIT_OK


def cmd_random(args) -> int:
    A = random_csmatrix(args.n, args.seed)
    if args.output is None:
        sys.stdout.write(format_matrix(A))
    else:
        write_matrix(args.output, A)
    print(f"sha256 {matrix_digest(A)}", file=sys.stderr)
    return EXIT_OK


COMMANDS = {
    "spectrum": cmd_spectrum,
    "oscillator": cmd_oscillator,
    "verify": cmd_verify,
    "bench": cmd_bench,
    "random": cmd_random,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except BreakdownError as err:
        print(f"error: {type(err).__name__}: {err}", file=sys.stderr)
        return EXIT_BREAKDOWN
    except NoConvergence as err:
        print(f"error: {type(err).__name__}: {err}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    except (ValueError, OSError) as err:
        print(f"error: {type(err).__name__}: {err}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
