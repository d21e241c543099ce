"""Timing harness for the two solver phases.

Matrices come from a declared ensemble: real and imaginary parts drawn
independently and uniformly from [-1, 1], then symmetrized.  Every matrix is
seeded by (seed, size, trial), so it does not depend on which other sizes or
trials are run.  Trials run serially.
"""

from __future__ import annotations

import gc
import hashlib
import time
from dataclasses import dataclass

import numpy as np

from .tql import ConvergenceOptions, eigen_tridiagonal
from .tridiag import tridiagonalize

PHASES = ("tridiagonalize", "ql")

#: the per-step operation count quoted for the reduction is O(n^2); over the
#: n-2 steps the phase is O(n^3), which is what the fitted exponent measures
NOMINAL_NOTE = (
    "each Householder step costs O(n^2) operations; over n-2 steps the "
    "reduction is O(n^3), so an exponent near 3 is expected for tridiagonalize"
)


def random_csmatrix(n: int, seed: int = 0, trial: int = 0) -> np.ndarray:
    rng = np.random.default_rng([seed, n, trial])
    A = rng.uniform(-1, 1, (n, n)) + 1j * rng.uniform(-1, 1, (n, n))
    return (A + A.T) / 2


def matrix_digest(A) -> str:
    A = np.ascontiguousarray(A, dtype=np.complex128)
    h = hashlib.sha256()
    h.update(str(A.shape).encode())
    h.update(A.tobytes())
    return h.hexdigest()


@dataclass(frozen=True)
class BenchRow:
    size: int
    phase: str
    median_seconds: float


def time_phases(A, opts: ConvergenceOptions | None = None) -> dict:
    # like timeit, keep the cyclic garbage collector out of the measurement
    enabled = gc.isenabled()
    gc.disable()
    try:
        t0 = time.perf_counter()
        T, _ = tridiagonalize(A)
        t1 = time.perf_counter()
        eigen_tridiagonal(T, opts or ConvergenceOptions())
        t2 = time.perf_counter()
    finally:
        if enabled:
            gc.enable()
    return {"tridiagonalize": t1 - t0, "ql": t2 - t1}


def run_bench(sizes, seed: int = 0, trials: int = 3) -> list[BenchRow]:
    if trials < 1:
        raise ValueError("trials must be positive")
    rows = []
    for n in sizes:
        if n < 2:
            raise ValueError(f"sizes must be at least 2, got {n}")
        samples = {p: [] for p in PHASES}
        for t in range(trials):
            times = time_phases(random_csmatrix(n, seed, t))
            for p in PHASES:
                samples[p].append(times[p])
        rows.extend(BenchRow(n, p, float(np.median(samples[p]))) for p in PHASES)
    return rows


def fit_exponents(rows: list[BenchRow]) -> dict:
    """Least-squares slope of log(time) against log(size), per phase."""
    out = {}
    for p in PHASES:
        pts = [(r.size, r.median_seconds) for r in rows if r.phase == p and r.median_seconds > 0]
        if len({s for s, _ in pts}) < 2:
            out[p] = None
            continue
        x = np.log([s for s, _ in pts])
        y = np.log([t for _, t in pts])
        out[p] = float(np.polyfit(x, y, 1)[0])
    return out


def bench_csv(rows: list[BenchRow], exponents: dict | None = None) -> str:
    lines = ["size,phase,median_seconds"]
    lines += [f"{r.size},{r.phase},{r.median_seconds:.6g}" for r in rows]
    if exponents:
        lines.append("")
        lines.append("phase,loglog_exponent")
        for p, k in exponents.items():
            lines.append(f"{p},{'' if k is None else f'{k:.3f}'}")
        lines.append(f"# {NOMINAL_NOTE}")
    return "\n".join(lines) + "\n"
