"""Anharmonic oscillator Hamiltonians in the harmonic-oscillator eigenbasis.

Matrices are built from the position operator x = (a + a^dagger)/sqrt(2) on
a basis enlarged by a guard band; powers of x are formed by matrix products
and then truncated, so every retained matrix element is exact.

Three models are supported:

* ``icubic``  -- H = -1/2 d^2/dx^2 + 1/2 x^2 + i G x^3 (PT-symmetric, real spectrum)
* ``ccubic``  -- complex-scaled cubic, x -> x e^{i theta}; resonances as eigenvalues
* ``quartic`` -- H = -1/2 d^2/dx^2 + 1/2 x^2 + g x^4 (real symmetric)
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

GUARD = 3
THETA_MAX = math.pi / 5
KINDS = ("icubic", "ccubic", "quartic")


@dataclass(frozen=True)
class OscillatorModel:
    kind: str
    coupling: float = 1.0
    basis_size: int = 64
    theta: float | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown model {self.kind!r}; expected one of {', '.join(KINDS)}")
        if int(self.basis_size) != self.basis_size or self.basis_size < 1:
            raise ValueError(f"basis size must be a positive integer, got {self.basis_size}")
        if not self.coupling > 0:
            raise ValueError(f"coupling must be positive, got {self.coupling}")
        if self.kind == "ccubic":
            if self.theta is None or not 0 < self.theta < THETA_MAX:
                raise ValueError(f"theta must lie in (0, pi/5), got {self.theta}")


@dataclass(frozen=True)
class WavefunctionSample:
    x: float
    value: complex
    modulus: float
    phase: float


def position_matrix(M: int) -> np.ndarray:
    """Matrix of x on the first M oscillator states; <n|x|n+1> = sqrt((n+1)/2)."""
    if M < 1:
        raise ValueError("M must be positive")
    k = np.arange(1, M)
    X = np.zeros((M, M))
    X[k - 1, k] = np.sqrt(k / 2)
    X[k, k - 1] = X[k - 1, k]
    return X


def parity_matrix(N: int) -> np.ndarray:
    return np.diag((-1.0) ** np.arange(N))


def build_hamiltonian(model: OscillatorModel) -> np.ndarray:
    N = model.basis_size
    M = N + GUARD
    x = position_matrix(M)
    x2 = x @ x
    h0 = np.diag(np.arange(M) + 0.5)
    g = model.coupling
    if model.kind == "icubic":
        H = h0 + 1j * g * (x2 @ x)
    elif model.kind == "quartic":
        H = h0 + g * (x2 @ x2)
    else:
        th = model.theta
        # -1/2 d^2/dx^2 = h0 - x^2/2 on the guarded space
        kinetic = h0 - 0.5 * x2
        H = (np.exp(-2j * th) * kinetic + np.exp(2j * th) * 0.5 * x2
             + g * np.exp(3j * th) * (x2 @ x))
    H = np.asarray(H[:N, :N], dtype=complex)
    return (H + H.T) / 2


def _phase_fixed(coeffs):
    c = np.asarray(coeffs, dtype=complex)
    big = c[np.argmax(np.abs(c))]
    if big == 0:
        return c
    return c * (abs(big) / big)


def parity_signature(coeffs, tol: float = 1e-8) -> dict:
    """Check that real and imaginary parts live on opposite parities.

    The vector is first rotated so its largest coefficient is real and
    positive.  Pattern A puts real parts on even basis indices and imaginary
    parts on odd ones; pattern B is the swap.  ``max_violation`` is the
    largest coefficient component breaking the better of the two patterns.
    """
    c = _phase_fixed(coeffs)
    even = np.arange(c.size) % 2 == 0
    re, im = np.abs(c.real), np.abs(c.imag)
    viol_a = max(np.max(re[~even], initial=0.0), np.max(im[even], initial=0.0))
    viol_b = max(np.max(re[even], initial=0.0), np.max(im[~even], initial=0.0))
    n_even_real = viol_a <= viol_b
    worst = float(min(viol_a, viol_b))
    return {"n_even_real": bool(n_even_real), "consistent": worst <= tol, "max_violation": worst}


def hermite_functions(N: int, xs) -> np.ndarray:
    """phi_n(x) for n < N, shape (N, len(xs)), by the three-term recurrence."""
    xs = np.asarray(xs, dtype=float)
    phi = np.zeros((N, xs.size))
    phi[0] = math.pi ** -0.25 * np.exp(-xs ** 2 / 2)
    if N > 1:
        phi[1] = math.sqrt(2) * xs * phi[0]
    for n in range(1, N - 1):
        phi[n + 1] = math.sqrt(2 / (n + 1)) * xs * phi[n] - math.sqrt(n / (n + 1)) * phi[n - 1]
    return phi


def wavefunction(coeffs, xs) -> np.ndarray:
    c = np.asarray(coeffs, dtype=complex)
    return c @ hermite_functions(c.size, xs)


def wavefunction_samples(coeffs, xs) -> list[WavefunctionSample]:
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    values = wavefunction(coeffs, xs)
    out = []
    for x, val in zip(xs, values):
        phase = math.atan2(val.imag, val.real)
        if phase >= math.pi:
            phase -= 2 * math.pi
        out.append(WavefunctionSample(float(x), complex(val), abs(val), phase))
    return out


def lowest_level_indices(eigenvalues, k: int) -> np.ndarray:
    """Indices of the k eigenvalues of smallest modulus, ordered by (real, imag).

    Truncating the basis leaves spurious eigenvalues of very large modulus
    (for the complex-scaled model they even have large negative real parts),
    so 'lowest' is taken by modulus rather than by real part.
    """
    w = np.asarray(eigenvalues)
    if k < 1:
        raise ValueError("k must be positive")
    idx = np.argsort(np.abs(w), kind="stable")[:k]
    return idx[np.lexsort((w[idx].imag, w[idx].real))]


def lowest_levels(eigenvalues, k: int) -> np.ndarray:
    return np.asarray(eigenvalues)[lowest_level_indices(eigenvalues, k)]
