"""Implicitly shifted QL (and QR) iteration for complex symmetric tridiagonals.

Every similarity transformation is a complex orthogonal plane rotation

    [[ c, s],
     [-s, c]]    with c^2 + s^2 = 1

acting on coordinates (p, p+1).  |c|^2 + |s|^2 is in general not 1, which is
why near-isotropic radicands are reported as RotationBreakdown instead of
being pushed through.

In the QL direction the Wilkinson shift comes from the upper-left 2x2 corner
of the active block, the first rotation acts on the lower-right corner and
the bulge is chased upward; the top eigenvalue of the block converges first.
The QR direction mirrors all of this.

Independent blocks produced by premature zeros are processed one after the
other on the same arrays; nothing runs concurrently.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field

import numpy as np

from .errors import NoConvergence, RotationBreakdown
from .indefinite import ISO_FACTOR, indefinite_dot, machine_eps, principal_sqrt
from .tridiag import TridiagonalMatrix, as_csmatrix, tridiagonalize

QUASI_NULL_RATIO = 1e-6
RETRY_PERTURBATION = 1e-8
RETRY_ATTEMPTS = 3


@dataclass
class ConvergenceOptions:
    """Knobs for the tridiagonal iteration.

    ``tol`` is the relative deflation threshold; None means machine epsilon
    of the working precision.  ``retry_breakdown`` enables the perturbed
    shift retry after a RotationBreakdown.
    """

    tol: float | None = None
    max_sweeps: int = 50
    direction: str = "ql"
    vectors: bool = False
    retry_breakdown: bool = False

    def __post_init__(self):
        self.direction = self.direction.lower()
        if self.direction not in ("ql", "qr"):
            raise ValueError(f"direction must be 'ql' or 'qr', got {self.direction!r}")
        if self.max_sweeps < 1:
            raise ValueError("max_sweeps must be positive")
        if self.tol is not None and self.tol < 0:
            raise ValueError("tol must be non-negative")


@dataclass(frozen=True)
class Rotation:
    c: complex
    s: complex
    k: int

    def matrix(self, n: int) -> np.ndarray:
        G = np.eye(n, dtype=complex)
        k = self.k
        G[k, k] = self.c
        G[k, k + 1] = self.s
        G[k + 1, k] = -self.s
        G[k + 1, k + 1] = self.c
        return G


@dataclass
class SweepState:
    """Working copy of a tridiagonal matrix during the iteration.

    ``d`` and ``e`` are Python lists (mutated in place); ``lo``/``hi`` bound
    the active block, inclusive.  When ``rotations`` is a list every emitted
    rotation is appended to it.
    """

    d: list
    e: list
    lo: int = 0
    hi: int = 0
    sigma: complex | None = None
    rotations: list | None = None
    sqrt: object = cmath.sqrt
    eps: float = float(np.finfo(float).eps)

    @classmethod
    def from_tridiagonal(cls, T: TridiagonalMatrix, **kw):
        dtype = np.result_type(T.D.dtype, T.E.dtype, np.complex128)
        if dtype == np.complex128:
            d = [complex(x) for x in T.D]
            e = [complex(x) for x in T.E]
            sq = cmath.sqrt
        else:
            d = list(T.D.astype(dtype))
            e = list(T.E.astype(dtype))
            sq = np.sqrt
        kw.setdefault("hi", len(d) - 1)
        return cls(d=d, e=e, sqrt=sq, eps=machine_eps(dtype), **kw)


def wilkinson_shift(D1, D2, E1):
    """Eigenvalue of [[D1, E1], [E1, D2]] closest to D1 in modulus.

    On an exact tie the "+" root is returned.
    """
    half = (D2 - D1) / 2
    r = principal_sqrt(half * half + E1 * E1)
    plus = half + r
    minus = half - r
    if abs(plus) == abs(minus):
        return (D1 + D2) / 2 + r
    big = plus if abs(plus) > abs(minus) else minus
    if big == 0:
        return D1
    # (half + r)(half - r) = -E1^2: the small root without cancellation
    return D1 - E1 * E1 / big


def make_rotation(a, b, k=0, sqrt=cmath.sqrt, eps=None) -> Rotation:
    """Rotation with c = a/r, s = b/r, r = sqrt(a^2 + b^2)."""
    c, s = _cs(a, b, k, sqrt, eps if eps is not None else machine_eps(np.complex128))
    return Rotation(c, s, k)


def initial_rotation(Dn, En1, sigma, k=0) -> Rotation:
    """The shifted rotation that starts a QL sweep on the lower-right corner."""
    return make_rotation(Dn - sigma, En1, k)


def _cs(a, b, k, sqrt, eps):
    if b == 0:
        return 1.0 + 0j, 0j
    r2 = a * a + b * b
    scale = abs(a) ** 2 + abs(b) ** 2
    if abs(r2) <= ISO_FACTOR * eps * scale:
        raise RotationBreakdown(k, abs(r2) / scale)
    r = sqrt(r2)
    return a / r, b / r


def _rotate_block(d, e, p, c, s):
    """Apply the rotation on (p, p+1) to the 2x2 diagonal block."""
    a = d[p]
    b = e[p]
    dd = d[p + 1]
    cs = c * s
    delta = s * (s * (dd - a) - 2 * c * b)
    d[p] = a + delta
    d[p + 1] = dd - delta
    e[p] = cs * (a - dd) + (c * c - s * s) * b


def _rotate_vectors(Zt, p, c, s):
    zp = Zt[p].copy()
    zq = Zt[p + 1]
    Zt[p] = c * zp - s * zq
    Zt[p + 1] = s * zp + c * zq


def ql_sweep(state: SweepState, Zt=None, sigma=None) -> SweepState:
    """One implicitly shifted QL pass over ``state.lo..state.hi``.

    ``Zt`` holds the accumulated transform as rows (the transpose of Z); each
    rotation is applied to it.  Raises RotationBreakdown(position).
    """
    d, e, lo, hi = state.d, state.e, state.lo, state.hi
    if hi <= lo:
        return state
    sqrt, eps, log = state.sqrt, state.eps, state.rotations
    if sigma is None:
        sigma = wilkinson_shift(d[lo], d[lo + 1], e[lo])
    state.sigma = sigma

    p = hi - 1
    c, s = _cs(d[hi] - sigma, e[p], p, sqrt, eps)
    bulge = 0
    while True:
        if log is not None:
            log.append(Rotation(c, s, p))
        _rotate_block(d, e, p, c, s)
        if Zt is not None:
            _rotate_vectors(Zt, p, c, s)
        if p == lo:
            break
        ep = e[p - 1]
        e[p - 1] = c * ep
        bulge = s * ep
        # chase the bulge at (p-1, p+1) into the codiagonal entry e[p]
        p -= 1
        en = e[p + 1]
        if bulge == 0:
            c, s = 1.0, 0.0
            continue
        r2 = en * en + bulge * bulge
        scale = abs(en) ** 2 + abs(bulge) ** 2
        if abs(r2) <= ISO_FACTOR * eps * scale:
            raise RotationBreakdown(p, abs(r2) / scale)
        r = sqrt(r2)
        c = en / r
        s = bulge / r
        e[p + 1] = r
    return state


def qr_sweep(state: SweepState, Zt=None, sigma=None) -> SweepState:
    """Mirror image of :func:`ql_sweep`: shift from the lower-right corner,
    bulge chased downward, bottom eigenvalue converges first."""
    d, e, lo, hi = state.d, state.e, state.lo, state.hi
    if hi <= lo:
        return state
    sqrt, eps, log = state.sqrt, state.eps, state.rotations
    if sigma is None:
        sigma = wilkinson_shift(d[hi], d[hi - 1], e[hi - 1])
    state.sigma = sigma

    p = lo
    c, s = _cs(d[lo] - sigma, e[lo], p, sqrt, eps)
    s = -s
    while True:
        if log is not None:
            log.append(Rotation(c, s, p))
        _rotate_block(d, e, p, c, s)
        if Zt is not None:
            _rotate_vectors(Zt, p, c, s)
        q = p + 1
        if q == hi:
            break
        en = e[q]
        e[q] = c * en
        bulge = -s * en
        # the bulge sits at (p, p+2); rotate (p+1, p+2) to fold it into e[p]
        p = q
        ep = e[p - 1]
        if bulge == 0:
            c, s = 1.0, 0.0
            continue
        r2 = ep * ep + bulge * bulge
        scale = abs(ep) ** 2 + abs(bulge) ** 2
        if abs(r2) <= ISO_FACTOR * eps * scale:
            raise RotationBreakdown(p, abs(r2) / scale)
        r = sqrt(r2)
        c = ep / r
        s = -bulge / r
        e[p - 1] = r
    return state


def _negligible(d, e, i, tol, tiny):
    ei = abs(e[i])
    return ei <= tol * (abs(d[i]) + abs(d[i + 1])) or ei <= tiny


def partition_scan(D, E, tol=None, lo=0, hi=None):
    """Split [lo, hi] into maximal blocks whose interior codiagonals are all
    above the deflation threshold.  Ranges are 0-based and inclusive."""
    if hi is None:
        hi = len(D) - 1
    if tol is None:
        tol = machine_eps(np.result_type(np.asarray(D).dtype, np.complex128))
    tiny = float(np.finfo(float).tiny)
    blocks = []
    start = lo
    for i in range(lo, hi):
        if _negligible(D, E, i, tol, tiny):
            blocks.append((start, i))
            start = i + 1
    blocks.append((start, hi))
    return blocks


@dataclass
class Spectrum:
    """Eigenvalues sorted by (real, imag) with optional eigenvectors.

    Column j of ``eigenvectors`` pairs with ``eigenvalues[j]``; ``sweeps[j]``
    counts the sweeps spent while that eigenvalue was the deflation target.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray | None = None
    sweeps: list = field(default_factory=list)
    total_sweeps: int = 0
    partitions: list = field(default_factory=list)
    max_residual: float | None = None
    quasi_null: list | None = None

    @property
    def n(self) -> int:
        return len(self.eigenvalues)


def _sweep_with_retry(sweep, state, Zt, opts):
    d, e, lo, hi = state.d, state.e, state.lo, state.hi
    if not opts.retry_breakdown:
        return sweep(state, Zt)
    saved = (d[lo:hi + 1], e[lo:hi], None if Zt is None else Zt[lo:hi + 1].copy())
    try:
        return sweep(state, Zt)
    except RotationBreakdown as err:
        last = err
    sigma = state.sigma
    for _ in range(RETRY_ATTEMPTS):
        d[lo:hi + 1], e[lo:hi] = saved[0], saved[1]
        if Zt is not None:
            Zt[lo:hi + 1] = saved[2]
        sigma = sigma * (1 + RETRY_PERTURBATION)
        try:
            return sweep(state, Zt, sigma=sigma)
        except RotationBreakdown as err:
            last = err
    raise last


def eigen_tridiagonal(T: TridiagonalMatrix, opts: ConvergenceOptions | None = None,
                      Z=None, vectors: bool | None = None) -> Spectrum:
    """Diagonalize a complex symmetric tridiagonal matrix.

    If ``Z`` (the transform returned by :func:`tridiagonalize`) is given, the
    eigenvectors refer to the original dense matrix.  Without ``Z`` but with
    ``vectors`` set, they are eigenvectors of ``T`` itself.
    """
    opts = opts or ConvergenceOptions()
    if vectors is None:
        vectors = opts.vectors or Z is not None
    state = SweepState.from_tridiagonal(T)
    d, e = state.d, state.e
    n = len(d)
    tol = opts.tol if opts.tol is not None else state.eps
    tiny = float(np.finfo(float).tiny)
    Zt = None
    if vectors:
        dtype = np.result_type(T.D.dtype, np.complex128)
        Zt = np.ascontiguousarray(Z.T, dtype=dtype) if Z is not None else np.eye(n, dtype=dtype)

    ql = opts.direction == "ql"
    sweep = ql_sweep if ql else qr_sweep
    counts = [0] * n
    total = 0
    partitions = []

    initial = partition_scan(d, e, tol)
    if len(initial) > 1:
        partitions.extend(initial)
    # processed in LIFO order; push so the top block comes out first
    stack = list(reversed(initial))
    while stack:
        lo, hi = stack.pop()
        count = 0
        while lo < hi:
            target = lo if ql else hi
            edge = lo if ql else hi - 1
            if _negligible(d, e, edge, tol, tiny):
                e[edge] = 0 * e[edge]
                counts[target] += count
                if ql:
                    lo += 1
                else:
                    hi -= 1
                count = 0
                continue
            inner = range(lo + 1, hi) if ql else range(lo, hi - 1)
            split = [i for i in inner if _negligible(d, e, i, tol, tiny)]
            if split:
                counts[target] += count
                blocks = partition_scan(d, e, tol, lo, hi)
                partitions.extend(blocks)
                for i in split:
                    e[i] = 0 * e[i]
                stack.extend(reversed(blocks))
                lo, hi = 0, -1
                break
            if count >= opts.max_sweeps:
                raise NoConvergence(target, count, what="eigenvalue")
            state.lo, state.hi = lo, hi
            _sweep_with_retry(sweep, state, Zt, opts)
            count += 1
            total += 1
        if lo == hi:
            counts[lo] += count

    values = np.array(d)
    order = np.lexsort((values.imag, values.real))
    spectrum = Spectrum(
        eigenvalues=values[order],
        sweeps=[counts[i] for i in order],
        total_sweeps=total,
        partitions=[[int(a), int(b)] for a, b in partitions],
    )
    if Zt is not None:
        X, flags = normalize_eigenvectors(Zt[order].T)
        spectrum.eigenvectors = X
        spectrum.quasi_null = flags
    return spectrum


def normalize_eigenvectors(X):
    """Scale columns to <x, x>_* = 1 and fix the sign.

    Columns whose bilinear self-product is negligible (quasi-null, typical
    near exceptional points) are scaled to unit Euclidean norm instead.  The
    sign is chosen so the largest-magnitude entry has argument in
    (-pi/2, pi/2].
    """
    X = np.array(X, copy=True)
    flags = []
    for j in range(X.shape[1]):
        x = X[:, j]
        xx = indefinite_dot(x, x)
        e2 = float(np.sum(np.abs(x) ** 2))
        if abs(xx) > QUASI_NULL_RATIO * e2:
            x = x / principal_sqrt(xx)
            flags.append(False)
        else:
            x = x / np.sqrt(e2)
            flags.append(True)
        big = x[np.argmax(np.abs(x))]
        if big.real < 0 or (big.real == 0 and big.imag < 0):
            x = -x
        X[:, j] = x
    return X, flags


def max_residual(A, eigenvalues, X) -> float:
    """max_j ||A x_j - lambda_j x_j||_2 / ||A||_F."""
    A = np.asarray(A)
    R = A @ X - X * np.asarray(eigenvalues)[None, :]
    norm = np.linalg.norm(A)
    res = np.linalg.norm(R, axis=0)
    if norm == 0:
        return float(np.max(res))
    return float(np.max(res) / norm)


def eigen(A, opts: ConvergenceOptions | None = None) -> Spectrum:
    """Eigenvalues (and optionally eigenvectors) of a complex symmetric matrix."""
    opts = opts or ConvergenceOptions()
    A = as_csmatrix(A)
    T, Z = tridiagonalize(A, accumulate=opts.vectors, check=False)
    spectrum = eigen_tridiagonal(T, opts, Z=Z, vectors=opts.vectors)
    if spectrum.eigenvectors is not None:
        spectrum.max_residual = max_residual(A, spectrum.eigenvalues, spectrum.eigenvectors)
    return spectrum
