"""Dense complex matrix arithmetic and the complex Schur decomposition.

Matrices are plain ``numpy`` arrays of dtype ``complex128``.  All matrix
functions in :mod:`matlog.matfun` go through :func:`schur_decompose`, which is
a Householder-Hessenberg reduction followed by single-shift complex QR with
Wilkinson shifts.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT, Tolerances
from .errors import DimensionError, SchurConvergenceError, SingularMatrixError


def as_matrix(a) -> np.ndarray:
    """Coerce *a* to a square, finite complex128 array (copying)."""
    m = np.array(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise DimensionError(f"expected a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def as_scalar(z) -> complex:
    z = complex(z)
    if not (np.isfinite(z.real) and np.isfinite(z.imag)):
        raise ValueError(f"non-finite scalar {z!r}")
    return z


def fro(a) -> float:
    a = np.asarray(a)
    big = float(np.max(np.abs(a), initial=0.0))
    if big == 0.0 or not math.isfinite(big):
        return big
    # divide first so the sum of squares neither underflows nor overflows
    return big * float(np.linalg.norm(a / big))


def _same_dim(a, b):
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise DimensionError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return a, b


def mat_mul(a, b) -> np.ndarray:
    a, b = _same_dim(a, b)
    return a @ b


def commutator(a, b) -> np.ndarray:
    """Return ``ab - ba``."""
    a, b = _same_dim(a, b)
    return a @ b - b @ a


def mat_inverse(a, tols: Tolerances = DEFAULT) -> np.ndarray:
    a = as_matrix(a)
    smin = np.linalg.svd(a, compute_uv=False)[-1]
    if smin < tols.inverse_floor * fro(a) or smin == 0.0:
        raise SingularMatrixError(
            f"smallest singular value {smin:.3e} below floor {tols.inverse_floor:g}*|A|_F"
        )
    return np.linalg.solve(a, np.eye(a.shape[0], dtype=np.complex128))


@dataclass(frozen=True)
class SchurForm:
    """``A = q @ t @ q^*`` with ``q`` unitary and ``t`` upper triangular."""

    q: np.ndarray
    t: np.ndarray
    source_dim: int

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.diag(self.t).copy()

    def reconstruct(self) -> np.ndarray:
        return self.q @ self.t @ self.q.conj().T

    def conjugate(self, f_t: np.ndarray) -> np.ndarray:
        """Map a function of ``t`` back to the original basis."""
        return self.q @ f_t @ self.q.conj().T


def _householder_hessenberg(a: np.ndarray):
    n = a.shape[0]
    h = a.copy()
    q = np.eye(n, dtype=np.complex128)
    for k in range(n - 2):
        x = h[k + 1:, k]
        xnorm = np.linalg.norm(x)
        if xnorm == 0.0 or np.linalg.norm(x[1:]) == 0.0:
            continue
        phase = x[0] / abs(x[0]) if x[0] != 0 else 1.0
        v = x.copy()
        v[0] += phase * xnorm
        v /= np.linalg.norm(v)
        h[k + 1:, :] -= 2.0 * np.outer(v, v.conj() @ h[k + 1:, :])
        h[:, k + 1:] -= 2.0 * np.outer(h[:, k + 1:] @ v, v.conj())
        q[:, k + 1:] -= 2.0 * np.outer(q[:, k + 1:] @ v, v.conj())
        h[k + 2:, k] = 0.0
    return h, q


def _givens(x: complex, y: complex):
    """Return (c, s) with [[c, s], [-conj(s), c]] @ [x, y] = [r, 0]."""
    ax, ay = abs(x), abs(y)
    if ay == 0.0:
        return 1.0, 0.0
    if ax == 0.0:
        return 0.0, np.conj(y) / ay
    r = np.hypot(ax, ay)
    return ax / r, (x / ax) * np.conj(y) / r


def _wilkinson_shift(a, b, c, d):
    # eigenvalue of [[a, b], [c, d]] closest to d
    half = 0.5 * (a - d)
    disc = np.sqrt(half * half + b * c)
    mu1 = 0.5 * (a + d) + disc
    mu2 = 0.5 * (a + d) - disc
    return mu1 if abs(mu1 - d) <= abs(mu2 - d) else mu2


def _is_upper_triangular(a: np.ndarray) -> bool:
    return not np.any(np.tril(a, -1))


_EPS = float(np.finfo(np.float64).eps)


def _scale2(a: np.ndarray, e: int) -> np.ndarray:
    # exact multiply by 2**e, split so the factors never overflow
    half = e // 2
    return a * math.ldexp(1.0, half) * math.ldexp(1.0, e - half)


def schur_decompose(a, tols: Tolerances = DEFAULT) -> SchurForm:
    """Complex Schur decomposition ``A = Q T Q^*``.

    Upper triangular input (including diagonal input) is returned as is with
    ``Q = I``.  No reordering of the eigenvalues is performed.
    """
    a = as_matrix(a)
    n = a.shape[0]
    if _is_upper_triangular(a):
        return SchurForm(np.eye(n, dtype=np.complex128), a, n)

    # power-of-two rescaling keeps Givens/Householder away from under/overflow
    exp2 = math.frexp(fro(a))[1]
    if abs(exp2) > 64:
        sf = schur_decompose(_scale2(a, -exp2), tols)
        return SchurForm(sf.q, _scale2(sf.t, exp2), n)

    h, q = _householder_hessenberg(a)
    scale = fro(a)
    cap = tols.schur_iter_factor * n
    total = 0
    since_deflation = 0
    hi = n - 1
    while hi > 0:
        lo = hi
        while lo > 0:
            diag = abs(h[lo - 1, lo - 1]) + abs(h[lo, lo])
            if diag == 0.0:
                diag = scale
            sub = abs(h[lo, lo - 1])
            if sub <= tols.deflation * diag or sub <= _EPS * scale:
                h[lo, lo - 1] = 0.0
                break
            lo -= 1
        if lo == hi:
            hi -= 1
            since_deflation = 0
            continue
        total += 1
        since_deflation += 1
        if total > cap:
            raise SchurConvergenceError(
                f"QR iteration did not converge after {cap} iterations", matrix=a
            )
        if since_deflation % 11 == 0:
            # exceptional shift to break cycles
            shift = h[hi, hi] + 0.75 * abs(h[hi, hi - 1])
        else:
            shift = _wilkinson_shift(h[hi - 1, hi - 1], h[hi - 1, hi], h[hi, hi - 1], h[hi, hi])

        x = h[lo, lo] - shift
        y = h[lo + 1, lo]
        for k in range(lo, hi):
            if k > lo:
                x = h[k, k - 1]
                y = h[k + 1, k - 1]
            c, s = _givens(x, y)
            g = np.array([[c, s], [-np.conj(s), c]])
            j0 = lo if k == lo else k - 1
            h[k:k + 2, j0:] = g @ h[k:k + 2, j0:]
            if k > lo:
                h[k + 1, k - 1] = 0.0
            i1 = min(k + 3, hi + 1)
            gh = g.conj().T
            h[:i1, k:k + 2] = h[:i1, k:k + 2] @ gh
            q[:, k:k + 2] = q[:, k:k + 2] @ gh

    t = np.triu(h)
    return SchurForm(q, t, n)


def eigenvalues(a, tols: Tolerances = DEFAULT) -> np.ndarray:
    return schur_decompose(a, tols).eigenvalues


def pair_nearest(xs, ys) -> float:
    """Greedy nearest pairing of two multisets; returns the largest pair distance."""
    remaining = list(ys)
    worst = 0.0
    for x in xs:
        j = int(np.argmin([abs(x - y) for y in remaining]))
        worst = max(worst, abs(x - remaining.pop(j)))
    return worst
