"""Brute-force eigenvalue oracle for small matrices.

Eigenvalues are obtained as roots of the characteristic polynomial, which is
computed by the Faddeev-LeVerrier recurrence and solved by Aberth iteration.
Nothing here shares code with the Householder/QL path, which is the point:
the oracle is used to cross-check that path on matrices of order <= 12.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NoConvergence

MAX_ORDER = 12
MAX_ITER = 500
UPDATE_TOL = 1e-14
CLUSTER_RADIUS = 0.1
ROUNDING_SLACK = 1000.0


@dataclass(frozen=True)
class PolyCoeffs:
    """Monic polynomial sum_k coeffs[k] lambda^k (ascending powers)."""

    coeffs: np.ndarray

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, z):
        return np.polyval(self.coeffs[::-1], z)


def char_poly(A) -> PolyCoeffs:
    """det(lambda I - A) by Faddeev-LeVerrier; only divides by integers <= n."""
    A = np.asarray(A, dtype=complex)
    n = A.shape[0]
    if A.ndim != 2 or A.shape != (n, n) or n == 0:
        raise ValueError(f"expected a non-empty square matrix, got shape {A.shape}")
    if n > MAX_ORDER:
        raise ValueError(f"oracle is limited to order <= {MAX_ORDER}, got {n}")
    c = np.zeros(n + 1, dtype=complex)
    c[n] = 1
    M = np.zeros_like(A)
    eye = np.eye(n, dtype=complex)
    for k in range(1, n + 1):
        M = A @ M + c[n - k + 1] * eye
        c[n - k] = -np.trace(A @ M) / k
    return PolyCoeffs(c)


def _horner(c_desc, z):
    """p(z), p'(z) and the rounding-error bound sum |c_k| |z|^k."""
    p = np.zeros_like(z)
    dp = np.zeros_like(z)
    bound = np.zeros(z.shape)
    az = np.abs(z)
    for a in c_desc:
        dp = dp * z + p
        p = p * z + a
        bound = bound * az + abs(a)
    return p, dp, bound


def _initial_guesses(c):
    n = len(c) - 1
    center = -c[n - 1] / n
    # shifted polynomial radius bound (Fujiwara-type) around the centroid
    shifted = np.polynomial.polynomial.Polynomial(c)(
        np.polynomial.polynomial.Polynomial([center, 1])).coef
    shifted = np.pad(shifted, (0, n + 1 - len(shifted)))
    radius = 0.0
    for k in range(1, n + 1):
        radius = max(radius, abs(shifted[n - k]) ** (1.0 / k))
    if radius == 0.0:
        radius = 1.0
    angles = 2 * np.pi * np.arange(n) / n + 0.4
    return center + radius * np.exp(1j * angles)


def poly_roots(p: PolyCoeffs, max_iter: int = MAX_ITER) -> np.ndarray:
    """All roots with multiplicity (Aberth-Ehrlich simultaneous iteration).

    A root is frozen once its update falls below 1e-14 of the root scale or
    |p(z)| is at the level of the rounding error of evaluating p.  Each root
    gets two safeguarded Newton polishing steps; clusters that are
    numerically a single multiple root are replaced by their centroid.
    """
    c = np.asarray(p.coeffs, dtype=complex)
    n = len(c) - 1
    if n < 1:
        raise ValueError("polynomial degree must be at least 1")
    c = c / c[n]
    c_desc = c[::-1]
    eps = np.finfo(float).eps

    z = _initial_guesses(c)
    active = np.ones(n, dtype=bool)
    for _ in range(max_iter):
        p_z, dp_z, bound = _horner(c_desc, z)
        scale = max(1.0, float(np.max(np.abs(z))))
        small = np.abs(p_z) <= 4 * n * eps * bound
        active &= ~small
        if not active.any():
            break
        idx = np.nonzero(active)[0]
        diff = z[idx, None] - z[None, :]
        diff[np.arange(idx.size), idx] = 1
        recip = 1 / diff
        recip[np.arange(idx.size), idx] = 0
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = p_z[idx] / dp_z[idx]
            w = ratio / (1 - ratio * recip.sum(axis=1))
        w[~np.isfinite(w)] = 0
        z[idx] -= w
        done = np.abs(w) <= UPDATE_TOL * scale
        active[idx[done]] = False
        if not active.any():
            break
    else:
        raise NoConvergence(None, max_iter, what="polynomial root iteration")

    for _ in range(2):
        p_z, dp_z, _ = _horner(c_desc, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            trial = z - p_z / dp_z
        ok = np.isfinite(trial)
        p_t, _, _ = _horner(c_desc, np.where(ok, trial, z))
        better = ok & (np.abs(p_t) < np.abs(p_z))
        z = np.where(better, trial, z)

    return _merge_multiple_roots(c, z)


def _merge_multiple_roots(c, z):
    """Replace clusters that behave like one k-fold root by their centroid.

    A k-fold root is smeared out by roughly eps^(1/k) in floating point, but
    it is a simple root of the (k-1)-th derivative, where Newton's method
    recovers it to full accuracy.  The cluster is accepted only if p and its
    first k-1 derivatives vanish there to within rounding error.
    """
    n = len(z)
    scale = max(1.0, float(np.max(np.abs(z))))
    # single-linkage clustering
    label = list(range(n))

    def find(i):
        while label[i] != i:
            label[i] = label[label[i]]
            i = label[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(z[i] - z[j]) <= CLUSTER_RADIUS * scale:
                label[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)

    eps = np.finfo(float).eps
    out = z.copy()
    for members in groups.values():
        k = len(members)
        if k < 2:
            continue
        # a k-fold root is a simple root of p^(k-1); refine the centroid there
        derivs = [c]
        for _ in range(k):
            d = derivs[-1]
            derivs.append(d[1:] * np.arange(1, len(d)))
        centre = np.array([np.mean(z[members])])
        for _ in range(5):
            val, dval, _ = _horner(derivs[k - 1][::-1], centre)
            if dval[0] == 0:
                break
            centre = centre - val / dval
        ok = all(
            abs(val[0]) <= ROUNDING_SLACK * n * eps * bound[0]
            for val, _, bound in (_horner(d[::-1], centre) for d in derivs[:k])
        )
        if ok and abs(centre[0] - np.mean(z[members])) <= CLUSTER_RADIUS * scale:
            out[members] = centre[0]
    return out


def eig_small(A) -> np.ndarray:
    """Eigenvalues of a matrix of order <= 12 via its characteristic polynomial."""
    A = np.asarray(A)
    if A.shape == (1, 1):
        return np.array([complex(A[0, 0])])
    return poly_roots(char_poly(A))


def hausdorff(a, b) -> float:
    a = np.asarray(a).ravel()
    b = np.asarray(b).ravel()
    if a.size == 0 or b.size == 0:
        return math.inf if a.size != b.size else 0.0
    d = np.abs(a[:, None] - b[None, :])
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def match_spectra(a, b) -> tuple[list[tuple[int, int]], float]:
    """Greedy nearest-pair matching of two multisets of equal size.

    Returns the index pairs and the largest matched distance, which bounds
    the Hausdorff distance from above and, unlike it, respects multiplicity.
    """
    a = np.asarray(a).ravel()
    b = np.asarray(b).ravel()
    if a.size != b.size:
        raise ValueError(f"multisets differ in size: {a.size} vs {b.size}")
    d = np.abs(a[:, None] - b[None, :])
    pairs = []
    worst = 0.0
    used_a = np.zeros(a.size, bool)
    used_b = np.zeros(b.size, bool)
    for flat in np.argsort(d, axis=None, kind="stable"):
        i, j = divmod(int(flat), b.size)
        if used_a[i] or used_b[j]:
            continue
        used_a[i] = used_b[j] = True
        pairs.append((i, j))
        worst = max(worst, float(d[i, j]))
        if len(pairs) == a.size:
            break
    return pairs, worst
