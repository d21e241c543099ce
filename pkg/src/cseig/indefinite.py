"""Indefinite bilinear inner product and generalized Householder reflectors.

The inner product here never conjugates: <x, y>_* = sum_i x_i y_i.  A
reflector H_v = 1 - 2 v v^T / <v, v>_* is complex symmetric and squares to
the identity, i.e. it is complex orthogonal but in general not unitary.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import IsotropicBreakdown, NonFiniteError

#: multiple of machine epsilon below which |<v,v>_*| / ||v||^2 is treated
#: as an isotropic vector
ISO_FACTOR = 100.0


def as_cvector(x, dtype=None) -> np.ndarray:
    """Return ``x`` as a 1-D complex array (complex128 unless ``x`` is wider)."""
    arr = np.asarray(x)
    if dtype is None:
        dtype = np.result_type(arr.dtype, np.complex128)
    arr = arr.astype(dtype, copy=False)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"expected a non-empty vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteError("vector contains NaN or Inf")
    return arr


def machine_eps(dtype) -> float:
    return float(np.finfo(np.dtype(dtype)).eps)


def indefinite_dot(x, y):
    """Bilinear product sum_i x_i y_i, without complex conjugation."""
    x = np.asarray(x)
    y = np.asarray(y)
    if x.shape != y.shape:
        raise ValueError(f"length mismatch: {x.shape} vs {y.shape}")
    if not (np.iscomplexobj(x) or np.iscomplexobj(y)):
        return np.sum(x * y)
    # Complex products may be evaluated with fused multiply-adds, which makes
    # x*y and y*x differ in the last bit.  Splitting into real products keeps
    # <x, y>_* == <y, x>_* exactly.
    xr, xi, yr, yi = x.real, x.imag, y.real, y.imag
    re = np.sum(xr * yr) - np.sum(xi * yi)
    im = np.sum(xr * yi + xi * yr)
    return _cplx(re, im)


def _cplx(re, im):
    # complex scalar of matching width (complex128 or clongdouble)
    out = np.empty((), dtype=np.result_type(re, np.complex64))
    out.real = re
    out.imag = im
    return out[()]


def principal_sqrt(z):
    """Square root with the branch cut on the negative real axis.

    The result has non-negative real part; a negative real radicand maps to
    +i sqrt(|z|) regardless of the sign of its (zero) imaginary part.
    """
    z = z + 0.0  # folds a signed -0.0 imaginary part onto +0.0
    if z.imag == 0 and z.real < 0:
        return type(z)(1j) * np.sqrt(-z.real)
    return np.sqrt(z)


def pseudo_norm(v):
    """|v|_* = sqrt(<v, v>_*) on the principal branch."""
    return principal_sqrt(indefinite_dot(v, v))


@dataclass(frozen=True)
class Reflector:
    """Generalized Householder reflector H_v with cached <v, v>_*."""

    v: np.ndarray
    vv: complex

    @property
    def order(self) -> int:
        return self.v.shape[0]


def check_isotropy(vv, v, step=None, scale=None):
    if scale is None:
        scale = float(np.vdot(v, v).real)
    eps = machine_eps(v.dtype)
    if scale == 0.0 or abs(vv) <= ISO_FACTOR * eps * scale:
        ratio = abs(vv) / scale if scale else 0.0
        raise IsotropicBreakdown(step, ratio)


def householder_vector(y, norm=None, stable=False):
    """Householder vector v = y + alpha e_last and the signed norm alpha.

    By default alpha = |y|_* on the principal branch, so H_v y = -|y|_* e_last.
    With ``stable`` set, alpha is whichever of +|y|_*, -|y|_* maximizes
    |y_n + alpha|; that keeps <v, v>_* = 2 alpha v_n large relative to
    ||v||^2 and is what the tridiagonal reduction uses.  In both cases
    H_v y = -alpha e_last.
    """
    return _householder_vector(as_cvector(y), norm, stable)


def _householder_vector(y, norm=None, stable=True):
    # unchecked core, used inside the reduction loop where y is known good
    if norm is None:
        norm = pseudo_norm(y)
    v = y.copy()
    last = y[-1]
    if stable and abs(last - norm) > abs(last + norm):
        norm = -norm
    v[-1] = last + norm
    return v, norm


def make_reflector(y, step=None, stable=False) -> Reflector:
    """Build H_v with H_v y = -alpha e_last (see :func:`householder_vector`).

    Raises IsotropicBreakdown when <v, v>_* is negligible against ||v||^2.
    """
    v, _ = householder_vector(y, stable=stable)
    vv = indefinite_dot(v, v)
    check_isotropy(vv, v, step)
    return Reflector(v=v, vv=vv)


def apply_reflector(H: Reflector, x) -> np.ndarray:
    x = as_cvector(x)
    if x.shape[0] != H.order:
        raise ValueError(f"length mismatch: reflector order {H.order}, vector {x.shape[0]}")
    return x - (2 * indefinite_dot(H.v, x) / H.vv) * H.v


def reflector_matrix(H: Reflector) -> np.ndarray:
    """Dense form 1 - 2 v v^T / <v, v>_*.  Meant for tests and small checks."""
    v = H.v
    O = np.outer(v, v)
    # v_i v_j and v_j v_i can differ in the last bit (fused multiply-add);
    # averaging with the transpose makes M exactly symmetric
    M = -(2 / H.vv) * ((O + O.T) / 2)
    M[np.diag_indices_from(M)] += 1
    return M
