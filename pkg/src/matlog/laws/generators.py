"""Random ensembles and the exceptional companion-pair family."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..config import DEFAULT, Tolerances
from ..errors import InvalidCompanionPairError, MatlogError
from ..linalg import as_matrix, as_scalar, fro, mat_inverse, schur_decompose
from ..matfun import cut_distance, mat_exp
from ..scalar import phi_scalar

MIN_CUT = 0.1
NORM_RANGE = (0.5, 10.0)
ARG_MARGIN = 0.1


def trial_rng(seed: int, *key: int) -> np.random.Generator:
    """Independent stream for (seed, key...), stable across scheduling."""
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in key)))


def unit_square(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.uniform(-1.0, 1.0, shape) + 1j * rng.uniform(-1.0, 1.0, shape)


def random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(g)
    d = np.diag(r)
    return q * (d / np.abs(d))


def min_cut_distance(eig) -> float:
    return min(cut_distance(complex(z)) for z in eig)


class GenerationError(MatlogError):
    pass


def _envelope(rng, draw, eig_of, attempts: int = 200) -> np.ndarray:
    """Draw until cut distance >= MIN_CUT after rescaling into NORM_RANGE."""
    for _ in range(attempts):
        m = draw()
        target = math.exp(rng.uniform(math.log(NORM_RANGE[0]), math.log(NORM_RANGE[1])))
        m = m * (target / fro(m))
        if min_cut_distance(eig_of(m)) >= MIN_CUT:
            return m
    raise GenerationError("could not draw a matrix inside the sampling envelope")


def random_dense(rng: np.random.Generator, n: int) -> np.ndarray:
    def draw():
        shift = complex(rng.uniform(0.0, 3.0), rng.uniform(-1.0, 1.0))
        return unit_square(rng, (n, n)) + shift * np.eye(n)
    return _envelope(rng, draw, np.linalg.eigvals)


def random_upper(rng: np.random.Generator, n: int) -> np.ndarray:
    def draw():
        shift = complex(rng.uniform(0.0, 3.0), rng.uniform(-1.0, 1.0))
        return np.triu(unit_square(rng, (n, n))) + shift * np.eye(n)
    return _envelope(rng, draw, np.diag)


def random_hermitian_pd(rng: np.random.Generator, n: int) -> np.ndarray:
    def draw():
        q = random_unitary(rng, n)
        d = np.exp(rng.uniform(math.log(0.2), math.log(5.0), n))
        m = (q * d) @ q.conj().T
        return 0.5 * (m + m.conj().T)
    return _envelope(rng, draw, np.linalg.eigvalsh)


# ---------------------------------------------------------------- commuting pairs


def _arg_pair(rng: np.random.Generator):
    lim = math.pi - ARG_MARGIN
    theta = rng.uniform(-lim, lim)
    lo, hi = max(-lim, -lim - theta), min(lim, lim - theta)
    psi = rng.uniform(lo, hi)
    r1, r2 = np.exp(rng.uniform(math.log(0.3), math.log(3.0), 2))
    return r1 * np.exp(1j * theta), r2 * np.exp(1j * psi)


def gen_commuting_arg_pair(seed, n: int, triangular: bool = False, attempts: int = 50):
    """Commuting x, y with paired eigenvalue arguments |arg l + arg m| <= pi - 0.1.

    Both are functions of one matrix ``S diag(d) S^-1`` with distinct ``d``;
    with ``triangular=True`` the similarity is unit upper triangular.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = seed if isinstance(seed, np.random.Generator) else trial_rng(seed)
    for _ in range(attempts):
        pairs = [_arg_pair(rng) for _ in range(n)]
        lam = np.array([p[0] for p in pairs])
        mu = np.array([p[1] for p in pairs])
        gaps = [abs(lam[i] - lam[j]) for i in range(n) for j in range(i)]
        gaps += [abs(mu[i] - mu[j]) for i in range(n) for j in range(i)]
        if gaps and min(gaps) < 1e-2:
            continue
        if triangular:
            s = np.eye(n) + np.triu(0.5 * unit_square(rng, (n, n)), 1)
        else:
            s = np.eye(n) + 0.3 * unit_square(rng, (n, n)) / math.sqrt(n)
        if np.linalg.cond(s) > 50.0:
            continue
        s_inv = mat_inverse(s)
        x = (s * lam) @ s_inv
        y = (s * mu) @ s_inv
        if triangular:
            x, y = np.triu(x), np.triu(y)
        return x, y
    raise GenerationError("retry budget exhausted for commuting pair")


def gen_commuting_hermitian_pd(rng: np.random.Generator, n: int):
    q = random_unitary(rng, n)
    d1 = np.exp(rng.uniform(math.log(0.2), math.log(5.0), n))
    d2 = np.exp(rng.uniform(math.log(0.2), math.log(5.0), n))
    x = (q * d1) @ q.conj().T
    y = (q * d2) @ q.conj().T
    return 0.5 * (x + x.conj().T), 0.5 * (y + y.conj().T)


# ---------------------------------------------------------------- companion family


@dataclass(frozen=True)
class Item3Instance:
    lambda_: complex
    mu: complex
    u: complex
    v: complex
    a: np.ndarray
    b: np.ndarray
    conjugator: np.ndarray | None
    identity_residual: float
    commutator_norm: float


def gen_item3_pair(u, v, lambda_, mu, conjugator=None, tols: Tolerances = DEFAULT) -> Item3Instance:
    """The noncommuting pair a = diag(l, l+u), b = [[m+v, 1], [0, m]].

    Requires phi(u) = phi(v) != 0 with u != v both nonzero; then
    ``exp(a+b) = exp(a) exp(b)`` although ``ab != ba``.
    """
    u, v = as_scalar(u), as_scalar(v)
    lam, mu = as_scalar(lambda_), as_scalar(mu)
    if u == 0 or v == 0:
        raise InvalidCompanionPairError("u and v must be nonzero")
    if abs(u - v) <= tols.root_separation:
        raise InvalidCompanionPairError("u and v must be distinct")
    cu, cv = phi_scalar(u), phi_scalar(v)
    if abs(cu) <= tols.companion_level:
        raise InvalidCompanionPairError("phi(u) must be nonzero")
    if abs(cu - cv) > tols.companion_level * max(1.0, abs(cu)):
        raise InvalidCompanionPairError(f"phi(u) - phi(v) = {abs(cu - cv):.3e}")
    a = np.array([[lam, 0.0], [0.0, lam + u]], dtype=np.complex128)
    b = np.array([[mu + v, 1.0], [0.0, mu]], dtype=np.complex128)
    conj = None
    if conjugator is not None:
        conj = as_matrix(conjugator)
        p_inv = mat_inverse(conj, tols)
        a = conj @ a @ p_inv
        b = conj @ b @ p_inv
    ea_eb = mat_exp(a, tols) @ mat_exp(b, tols)
    resid = fro(mat_exp(a + b, tols) - ea_eb) / fro(ea_eb)
    comm = fro(a @ b - b @ a) / (fro(a) * fro(b))
    return Item3Instance(lam, mu, u, v, a, b, conj, resid, comm)


def joint_triangularize(a0, b0, seed: int = 0, tols: Tolerances = DEFAULT):
    """Common unitary Q with Q* a0 Q and Q* b0 Q upper triangular (commuting input).

    Uses the Schur vectors of a generic combination ``a0 + t b0``.
    """
    a0, b0 = as_matrix(a0), as_matrix(b0)
    rng = trial_rng(seed)
    best = None
    for _ in range(8):
        t = complex(*rng.normal(size=2))
        q = schur_decompose(a0 + t * b0, tols).q
        ta = q.conj().T @ a0 @ q
        tb = q.conj().T @ b0 @ q
        err = fro(np.tril(ta, -1)) + fro(np.tril(tb, -1))
        if best is None or err < best[0]:
            best = (err, q, np.triu(ta), np.triu(tb))
        if err <= 1e-10 * (1.0 + fro(a0) + fro(b0)):
            break
    return best[1], best[2], best[3]
