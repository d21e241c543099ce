"""Reduction of a dense complex symmetric matrix to tridiagonal form.

A sequence of n-2 generalized Householder similarity transformations
annihilates the columns from the right: at step m the first m entries of
column m+1 are projected onto the m-th axis.  The accumulated transform Z is
complex orthogonal (Z^T Z = 1), so T = Z^T A Z.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonFiniteError, NotSymmetricError
from .indefinite import (
    _householder_vector,
    check_isotropy,
    indefinite_dot,
    machine_eps,
    principal_sqrt,
)

#: skip rule: entries of y (except the last) below SKIP_FACTOR*eps*||A||_F
#: count as zero and no reflector is built
SKIP_FACTOR = 10.0


@dataclass
class TridiagonalMatrix:
    """Complex symmetric tridiagonal matrix stored as diagonal and codiagonal."""

    D: np.ndarray
    E: np.ndarray

    def __post_init__(self):
        self.D = np.asarray(self.D)
        self.E = np.asarray(self.E)
        if self.D.ndim != 1 or self.D.size == 0:
            raise ValueError("diagonal must be a non-empty vector")
        if self.E.shape != (self.D.size - 1,):
            raise ValueError(f"codiagonal must have length {self.D.size - 1}, got {self.E.shape}")

    @property
    def n(self) -> int:
        return self.D.size

    def to_dense(self) -> np.ndarray:
        dtype = np.result_type(self.D.dtype, self.E.dtype)
        T = np.diag(self.D).astype(dtype)
        k = np.arange(self.n - 1)
        T[k, k + 1] = self.E
        T[k + 1, k] = self.E
        return T


def as_csmatrix(A, rtol: float = 1e-12) -> np.ndarray:
    """Validate a complex symmetric matrix and return a symmetrized complex copy.

    Asymmetry up to ``rtol * max|A_ij|`` is tolerated and averaged away.
    """
    A = np.asarray(A)
    A = A.astype(np.result_type(A.dtype, np.complex128))
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] == 0:
        raise ValueError(f"expected a non-empty square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise NonFiniteError("matrix contains NaN or Inf")
    scale = np.max(np.abs(A))
    asym = np.max(np.abs(A - A.T))
    if asym > rtol * scale:
        raise NotSymmetricError(
            f"matrix is not complex symmetric: max|A_ij - A_ji| = {asym:.3e} "
            f"exceeds {rtol:g} * max|A| = {rtol * scale:.3e}"
        )
    return (A + A.T) / 2


def householder_step(B, v, vv=None) -> np.ndarray:
    """Return H_v B H_v via the rank-2 update B - v w^T - w v^T.

    With p = <v,v>_*/2, u = B v / p, q = v.u / (2p) and w = u - q v.  The
    reflector is never formed.  Raises IsotropicBreakdown if <v,v>_* is
    negligible.
    """
    B = np.asarray(B)
    v = np.asarray(v)
    if vv is None:
        vv = indefinite_dot(v, v)
        check_isotropy(vv, v)
    return B - _sym_update(B, v, vv)


def _sym_update(B, v, vv):
    p = vv / 2
    u = (B @ v) / p
    q = (v @ u) / (2 * p)
    w = u - q * v
    S = np.outer(v, w)
    # S + S^T is exactly symmetric, so B - S inherits the exact symmetry of B
    return S + S.T


def tridiagonalize(A, accumulate: bool = False, check: bool = True):
    """Reduce ``A`` to tridiagonal form.

    Returns ``(T, Z)`` where ``Z`` is None unless ``accumulate`` is set.
    Raises IsotropicBreakdown(step) when a Householder vector is isotropic.
    """
    W = as_csmatrix(A) if check else np.array(A, dtype=np.result_type(np.asarray(A).dtype, np.complex128))
    n = W.shape[0]
    eps = machine_eps(W.dtype)
    reflectors = []
    E = np.zeros(max(n - 1, 0), dtype=W.dtype)
    skip_tol2 = (SKIP_FACTOR * eps * np.linalg.norm(W)) ** 2

    for m in range(n - 1, 1, -1):
        y = W[:m, m].copy()
        head2 = np.vdot(y[:-1], y[:-1]).real
        if head2 <= skip_tol2:
            E[m - 1] = y[-1]
        else:
            norm = principal_sqrt(y @ y)
            v, norm = _householder_vector(y, norm, stable=True)
            # <v,v>_* = <y,y>_* + 2 alpha y_n + alpha^2 = 2 alpha v_n, with no cancellation
            vv = 2 * norm * v[-1]
            check_isotropy(vv, v, step=m, scale=head2 + abs(v[-1]) ** 2)
            W[:m, :m] -= _sym_update(W[:m, :m], v, vv)
            E[m - 1] = -norm
            if accumulate:
                reflectors.append((m, v, vv))
        W[:m, m] = 0
        W[m, :m] = 0

    if n >= 2:
        E[0] = W[0, 1]
    T = TridiagonalMatrix(D=np.diagonal(W).copy(), E=E)
    Z = _accumulate(n, reflectors, W.dtype) if accumulate else None
    return T, Z


def _accumulate(n, reflectors, dtype):
    # Z = H_{n-1} ... H_2, built backward: once H_{m-1} ... H_2 is formed it
    # differs from the identity only in its leading (m-1) block, so H_m acts
    # on the leading m x m block alone.  This is cheaper and keeps Z^T Z
    # closer to the identity than right-multiplying a running identity.
    Z = np.eye(n, dtype=dtype)
    for m, v, vv in reversed(reflectors):
        Zb = Z[:m, :m]
        Zb -= np.outer(v, v @ Zb) * (2 / vv)
    return Z


def similarity_residual(A, T: TridiagonalMatrix, Z) -> float:
    """||Z^T A Z - T||_F / ||A||_F."""
    A = np.asarray(A)
    Z = np.asarray(Z)
    if A.shape != Z.shape or A.shape[0] != T.n:
        raise ValueError(f"order mismatch: A {A.shape}, Z {Z.shape}, T order {T.n}")
    norm = np.linalg.norm(A)
    R = Z.T @ A @ Z - T.to_dense()
    if norm == 0:
        return float(np.linalg.norm(R))
    return float(np.linalg.norm(R) / norm)

