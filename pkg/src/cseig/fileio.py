"""Text matrix files, spectrum reports and wavefunction sample tables.

Matrix file grammar::

    n
    re(A11) im(A11) re(A12) im(A12) ... re(A1n) im(A1n)
    ...
    re(An1) im(An1) ...               re(Ann) im(Ann)

Values are written with 17 significant digits so that a double survives the
round trip unchanged.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import NonFiniteError, NotSymmetricError
from .tql import Spectrum

SYMMETRY_RTOL = 1e-12
FLOAT_FORMAT = ".17g"
WAVEFUNCTION_COLUMNS = ("state_index", "x", "re", "im", "modulus", "phase")


class MatrixFormatError(ValueError):
    """The matrix file does not follow the grammar."""


def parse_matrix(text: str, rtol: float = SYMMETRY_RTOL) -> np.ndarray:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise MatrixFormatError("empty matrix file")
    try:
        n = int(lines[0].strip())
    except ValueError:
        raise MatrixFormatError(f"line 1: expected the matrix order, got {lines[0].strip()!r}") from None
    if n < 1:
        raise MatrixFormatError(f"line 1: matrix order must be positive, got {n}")
    if len(lines) != n + 1:
        raise MatrixFormatError(f"expected {n} matrix rows, found {len(lines) - 1}")
    A = np.empty((n, n), dtype=complex)
    for i, line in enumerate(lines[1:]):
        fields = line.split()
        if len(fields) != 2 * n:
            raise MatrixFormatError(f"row {i + 1}: expected {2 * n} numbers, found {len(fields)}")
        try:
            vals = np.array([float(f) for f in fields])
        except ValueError as err:
            raise MatrixFormatError(f"row {i + 1}: {err}") from None
        A[i] = vals[0::2] + 1j * vals[1::2]
    if not np.all(np.isfinite(A)):
        raise NonFiniteError("matrix file contains NaN or Inf")
    asym = np.max(np.abs(A - A.T))
    if asym > rtol * np.max(np.abs(A)):
        raise NotSymmetricError(
            f"matrix is not complex symmetric: max|A_ij - A_ji| = {asym:.3e}")
    return (A + A.T) / 2


def read_matrix(path) -> np.ndarray:
    return parse_matrix(Path(path).read_text())


def format_matrix(A) -> str:
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    out = [str(A.shape[0])]
    for row in A:
        out.append(" ".join(f"{z.real:{FLOAT_FORMAT}} {z.imag:{FLOAT_FORMAT}}" for z in row))
    return "\n".join(out) + "\n"


def write_matrix(path, A) -> None:
    Path(path).write_text(format_matrix(A))


def _num(x):
    return float(f"{float(x):{FLOAT_FORMAT}}")


@dataclass
class SpectrumReport:
    eigenvalues: list
    sweeps: list
    partitions: list
    max_residual: float | None
    options: dict
    wall_seconds: float
    precision: str = "double"
    eigenvectors: np.ndarray | None = None
    quasi_null: list | None = None
    extra: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        if self.eigenvectors is not None:
            return int(self.eigenvectors.shape[0])
        return len(self.eigenvalues)

    @classmethod
    def from_spectrum(cls, spectrum: Spectrum, options: dict, wall_seconds: float,
                      precision: str = "double") -> SpectrumReport:
        return cls(
            eigenvalues=[complex(z) for z in spectrum.eigenvalues],
            sweeps=list(spectrum.sweeps),
            partitions=[list(p) for p in spectrum.partitions],
            max_residual=spectrum.max_residual,
            options=dict(options),
            wall_seconds=wall_seconds,
            precision=precision,
            eigenvectors=None if spectrum.eigenvectors is None
            else np.asarray(spectrum.eigenvectors, dtype=complex),
            quasi_null=spectrum.quasi_null,
        )

    def to_dict(self) -> dict:
        d = {
            "n": self.n,
            "eigenvalues": [{"re": _num(z.real), "im": _num(z.imag)} for z in self.eigenvalues],
            "sweeps": [int(s) for s in self.sweeps],
            "partitions": [[int(a), int(b)] for a, b in self.partitions],
            "max_residual": None if self.max_residual is None else _num(self.max_residual),
            "options": self.options,
            "wall_seconds": self.wall_seconds,
            "precision": self.precision,
        }
        if self.eigenvectors is not None:
            # column j as a list of [re, im] pairs
            d["eigenvectors"] = [[[_num(z.real), _num(z.imag)] for z in col]
                                 for col in self.eigenvectors.T]
            d["quasi_null"] = [bool(f) for f in (self.quasi_null or [])]
        d.update(self.extra)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["index", "re", "im", "sweeps"])
        for i, (z, s) in enumerate(zip(self.eigenvalues, self.sweeps)):
            w.writerow([i, f"{z.real:{FLOAT_FORMAT}}", f"{z.imag:{FLOAT_FORMAT}}", s])
        return buf.getvalue()

    @classmethod
    def from_dict(cls, d: dict) -> SpectrumReport:
        try:
            eigenvalues = [complex(e["re"], e["im"]) for e in d["eigenvalues"]]
            vectors = d.get("eigenvectors")
            if vectors is not None:
                arr = np.array(vectors, dtype=float)
                if arr.ndim != 3 or arr.shape[2] != 2:
                    raise ValueError("eigenvectors must be a list of [re, im] pair lists")
                vectors = (arr[..., 0] + 1j * arr[..., 1]).T
            known = {"n", "eigenvalues", "sweeps", "partitions", "max_residual", "options",
                     "wall_seconds", "precision", "eigenvectors", "quasi_null"}
            return cls(
                eigenvalues=eigenvalues,
                sweeps=list(d.get("sweeps", [])),
                partitions=list(d.get("partitions", [])),
                max_residual=d.get("max_residual"),
                options=dict(d.get("options", {})),
                wall_seconds=float(d.get("wall_seconds", 0.0)),
                precision=d.get("precision", "double"),
                eigenvectors=vectors,
                quasi_null=d.get("quasi_null"),
                extra={k: v for k, v in d.items() if k not in known},
            )
        except (KeyError, TypeError) as err:
            raise ValueError(f"malformed spectrum report: {err!r}") from None


def read_report(path) -> SpectrumReport:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as err:
        raise ValueError(f"report is not valid JSON: {err}") from None
    return SpectrumReport.from_dict(data)


def wavefunction_csv(rows) -> str:
    """rows: iterable of (state_index, WavefunctionSample)."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(WAVEFUNCTION_COLUMNS)
    for k, s in rows:
        w.writerow([k, f"{s.x:.6g}", f"{s.value.real:{FLOAT_FORMAT}}",
                    f"{s.value.imag:{FLOAT_FORMAT}}", f"{s.modulus:{FLOAT_FORMAT}}",
                    f"{s.phase:{FLOAT_FORMAT}}"])
    return buf.getvalue()
