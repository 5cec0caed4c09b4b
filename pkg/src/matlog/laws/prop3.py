"""Block upper-triangular pairs and the phi-conditions on their last column."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..config import DEFAULT, Tolerances
from ..errors import MatlogError
from ..linalg import as_matrix, as_scalar, fro
from ..matfun import mat_exp, mat_phi
from ..scalar import phi_scalar
from .generators import unit_square


class NonCommutingBlocksError(MatlogError, ValueError):
    pass


@dataclass(frozen=True)
class Prop3Instance:
    """``a = [[a0, u], [0, alpha]]``, ``b = [[b0, v], [0, beta]]`` with a0 b0 = b0 a0.

    ``a0`` and ``b0`` must already be upper triangular; use
    :func:`matlog.laws.generators.joint_triangularize` for general pairs.
    """

    a0: np.ndarray
    b0: np.ndarray
    alpha: complex
    beta: complex
    u_col: np.ndarray
    v_col: np.ndarray

    def __post_init__(self):
        a0, b0 = as_matrix(self.a0), as_matrix(self.b0)
        if a0.shape != b0.shape:
            raise ValueError("a0 and b0 must have the same size")
        m = a0.shape[0]
        u = np.asarray(self.u_col, dtype=np.complex128).reshape(m)
        v = np.asarray(self.v_col, dtype=np.complex128).reshape(m)
        object.__setattr__(self, "a0", a0)
        object.__setattr__(self, "b0", b0)
        object.__setattr__(self, "u_col", u)
        object.__setattr__(self, "v_col", v)
        object.__setattr__(self, "alpha", as_scalar(self.alpha))
        object.__setattr__(self, "beta", as_scalar(self.beta))
        if fro(a0 @ b0 - b0 @ a0) > 1e-12 * max(1.0, fro(a0) * fro(b0)):
            raise NonCommutingBlocksError("a0 and b0 do not commute")
        scale = 1e-12 * max(1.0, fro(a0) + fro(b0))
        if fro(np.tril(a0, -1)) > scale or fro(np.tril(b0, -1)) > scale:
            raise ValueError("a0 and b0 must be upper triangular")

    @property
    def n(self) -> int:
        return self.a0.shape[0] + 1

    @property
    def a1(self) -> np.ndarray:
        return self.a0 - self.alpha * np.eye(self.n - 1)

    @property
    def b1(self) -> np.ndarray:
        return self.b0 - self.beta * np.eye(self.n - 1)

    @property
    def w(self) -> np.ndarray:
        return self.a1 @ self.v_col - self.b1 @ self.u_col

    @property
    def alphas(self) -> np.ndarray:
        return np.diag(self.a1).copy()

    @property
    def betas(self) -> np.ndarray:
        return np.diag(self.b1).copy()

    def pivot_k(self, tol: float = DEFAULT.pivot):
        """1-based index of the last entry of w above *tol*, or None."""
        w = self.w
        idx = np.flatnonzero(np.abs(w) > tol)
        return int(idx[-1]) + 1 if idx.size else None

    def assemble(self):
        m = self.n - 1
        a = np.zeros((self.n, self.n), dtype=np.complex128)
        b = np.zeros_like(a)
        a[:m, :m], a[:m, m], a[m, m] = self.a0, self.u_col, self.alpha
        b[:m, :m], b[:m, m], b[m, m] = self.b0, self.v_col, self.beta
        return a, b


@dataclass(frozen=True)
class Prop3Result:
    identity_residual: float
    cond6_residual: float
    cond7_residual: float
    cond8_residual: float
    identity_holds: bool
    cond6_holds: bool
    cond7_holds: bool
    cond8_holds: bool
    pivot_k: int | None
    item4_holds: bool
    item5_holds: bool
    item4_indices: tuple
    item5_indices: tuple

    def to_json(self) -> dict:
        return dict(self.__dict__, item4_indices=list(self.item4_indices),
                    item5_indices=list(self.item5_indices))


def _item4(alpha: complex, beta: complex, tol: float) -> bool:
    if abs(beta) <= tol:
        return False
    lhs, rhs = phi_scalar(alpha + beta), phi_scalar(alpha)
    return abs(lhs - rhs) <= tol * max(1.0, abs(rhs))


def _item5(alpha: complex, beta: complex, tol: float) -> bool:
    return abs(alpha) > tol and abs(beta) <= tol and abs(phi_scalar(-alpha) - 1.0) <= tol


def verify_prop3(inst: Prop3Instance, tols: Tolerances = DEFAULT) -> Prop3Result:
    a, b = inst.assemble()
    ea_eb = mat_exp(a, tols) @ mat_exp(b, tols)
    id_res = fro(mat_exp(a + b, tols) - ea_eb) / fro(ea_eb)

    a1, b1 = inst.a1, inst.b1
    u, v, w = inst.u_col, inst.v_col, inst.w
    ph_s, ph_a, ph_b = mat_phi(a1 + b1, tols), mat_phi(a1, tols), mat_phi(b1, tols)
    ph_ma = mat_phi(-a1, tols)
    e_a1, e_b1 = mat_exp(a1, tols), mat_exp(b1, tols)

    # same normalisation as the identity residual once e^(alpha+beta) is factored out
    top = e_a1 @ ph_b @ v + ph_a @ u
    denom6 = np.sqrt(fro(e_a1 @ e_b1) ** 2 + np.linalg.norm(top) ** 2 + 1.0)
    lhs6 = (ph_s - ph_a) @ u
    rhs6 = (e_a1 @ ph_b - ph_s) @ v
    c6 = np.linalg.norm(lhs6 - rhs6) / denom6

    wn = np.linalg.norm(w)
    c7 = np.linalg.norm((ph_s - ph_a) @ w) / ((fro(ph_s) + fro(ph_a)) * wn) if wn > 0 else 0.0
    c8 = np.linalg.norm((ph_b - ph_ma) @ w) / ((fro(ph_b) + fro(ph_ma)) * wn) if wn > 0 else 0.0

    k = inst.pivot_k(tols.pivot)
    al, be = inst.alphas, inst.betas
    i4 = tuple(i + 1 for i in range(len(al)) if _item4(al[i], be[i], tols.item_match))
    i5 = tuple(i + 1 for i in range(len(al)) if _item5(al[i], be[i], tols.item_match))
    return Prop3Result(
        float(id_res), float(c6), float(c7), float(c8),
        id_res <= tols.identity, c6 <= tols.identity,
        c7 <= tols.identity, c8 <= tols.identity,
        k, k is not None and k in i4, k is not None and k in i5, i4, i5,
    )


PROP3_KINDS = ("generic", "commuting", "exceptional", "generic")


def _commuting_blocks(rng: np.random.Generator, m: int):
    a0 = np.triu(unit_square(rng, (m, m)))
    c = unit_square(rng, 3) * np.array([1.0, 0.5, 0.2])
    b0 = c[0] * np.eye(m) + c[1] * a0 + c[2] * (a0 @ a0)
    return a0, b0


def random_prop3_instance(rng: np.random.Generator, n: int, kind: str,
                          companion=None) -> Prop3Instance:
    """Draw a block instance of size n (n >= 2).

    ``generic``: random columns, so e^(a+b) != e^a e^b.  ``commuting``:
    columns with w = 0.  ``exceptional``: a companion pair (u, v) embedded in
    the last diagonal position, then conjugated by a unit upper triangular
    matrix; requires ``companion=(u, v)``.
    """
    m = n - 1
    if kind == "generic":
        a0, b0 = _commuting_blocks(rng, m)
        alpha, beta = unit_square(rng, 2)
        return Prop3Instance(a0, b0, alpha, beta, unit_square(rng, m), unit_square(rng, m))
    if kind == "commuting":
        a0, b0 = _commuting_blocks(rng, m)
        alpha, beta = unit_square(rng, 2)
        # keep b1 invertible so u = b1^-1 a1 v is defined
        while np.min(np.abs(np.diag(b0) - beta)) <= 0.05:
            beta += 0.25
        b1 = b0 - beta * np.eye(m)
        v = unit_square(rng, m)
        u = np.linalg.solve(b1, (a0 - alpha * np.eye(m)) @ v)
        return Prop3Instance(a0, b0, alpha, beta, u, v)
    if kind == "exceptional":
        if companion is None:
            raise ValueError("exceptional instances need a companion pair")
        u, v = companion
        lam, mu = 0.5 * unit_square(rng, 2)
        a0 = np.zeros((m, m), dtype=np.complex128)
        b0 = np.zeros_like(a0)
        if m > 1:
            e0, f0 = _commuting_blocks(rng, m - 1)
            a0[:-1, :-1], b0[:-1, :-1] = e0, f0
        a0[-1, -1], b0[-1, -1] = lam, mu + v
        u_col = np.zeros(m, dtype=np.complex128)
        v_col = np.zeros(m, dtype=np.complex128)
        v_col[-1] = 1.0
        s = np.eye(m) + np.triu(0.5 * unit_square(rng, (m, m)), 1)
        s_inv = np.linalg.inv(s)
        a0, b0 = np.triu(s @ a0 @ s_inv), np.triu(s @ b0 @ s_inv)
        return Prop3Instance(a0, b0, lam + u, mu, s @ u_col, s @ v_col)
    raise ValueError(f"unknown instance kind {kind!r}")
