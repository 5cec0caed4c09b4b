"""Spectral classification of 2x2 pairs with exp(a+b) = exp(a) exp(b), ab != ba."""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field

import numpy as np

from ..config import DEFAULT, Tolerances
from ..linalg import as_matrix, eigenvalues, fro
from ..matfun import mat_exp
from ..scalar import TWO_PI, phi_scalar, solve_u_set

U_REFERENCE_COUNT = 20
UNKNOWN_BAND = "UNKNOWN_BAND"


@functools.lru_cache(maxsize=4)
def _u_reference(count: int) -> tuple:
    upper = solve_u_set(count)
    return tuple(upper + [r.conjugate() for r in upper])


@dataclass(frozen=True)
class Prop1Classification:
    applicable: bool
    identity_residual: float
    commutator_norm: float
    gap_a: complex = 0j
    gap_b: complex = 0j
    item1: bool = False
    item2: object = False  # True, False or UNKNOWN_BAND
    item2_hits: tuple = ()
    item3: bool = False
    item3_pair: tuple | None = None
    structural_check: str = "PARTIAL"
    notes: tuple = field(default=())

    @property
    def items(self) -> tuple:
        out = []
        if self.item1:
            out.append(1)
        if self.item2 is True:
            out.append(2)
        if self.item3:
            out.append(3)
        return tuple(out)


def _in_lattice(gap: complex, tol: float) -> bool:
    k = round(gap.imag / TWO_PI)
    return k != 0 and abs(gap - 1j * TWO_PI * k) <= tol * max(1.0, abs(gap))


def classify_prop1(a, b, tols: Tolerances = DEFAULT, u_count: int = U_REFERENCE_COUNT):
    """Report which of the three spectral alternatives hold for (a, b).

    The U-membership alternative is tested against the first ``u_count`` roots of e^u = 1 + u
    and their conjugates; gaps beyond that band give ``UNKNOWN_BAND``.
    Simultaneous similarity for the companion alternative is not checked (``PARTIAL``).
    """
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != (2, 2) or b.shape != (2, 2):
        raise ValueError("classify_prop1 expects 2x2 matrices")
    ea_eb = mat_exp(a, tols) @ mat_exp(b, tols)
    resid = fro(mat_exp(a + b, tols) - ea_eb) / max(fro(ea_eb), np.finfo(float).tiny)
    scale = fro(a) * fro(b)
    comm = fro(a @ b - b @ a) / scale if scale > 0 else 0.0
    if resid > tols.identity or comm <= tols.commuting:
        return Prop1Classification(False, resid, comm)

    la = eigenvalues(a, tols)
    lb = eigenvalues(b, tols)
    gap_a = complex(la[1] - la[0])
    gap_b = complex(lb[1] - lb[0])

    item1 = _in_lattice(gap_a, tols.gap_lattice) and _in_lattice(gap_b, tols.gap_lattice)

    roots = _u_reference(u_count)
    band_top = max(abs(r.imag) for r in roots)
    hits = []
    outside = False
    for label, g in (("+a", gap_a), ("-a", -gap_a), ("+b", gap_b), ("-b", -gap_b)):
        if any(abs(g - r) <= tols.item_match for r in roots):
            hits.append(label)
        elif abs(g.imag) > band_top + math.pi:
            outside = True
    item2 = True if hits else (UNKNOWN_BAND if outside else False)

    item3_pair = None
    for u in (gap_a, -gap_a):
        for v in (gap_b, -gap_b):
            if u == 0 or v == 0 or abs(u - v) <= tols.root_separation:
                continue
            cu, cv = phi_scalar(u), phi_scalar(v)
            if abs(cu) > tols.level_match and abs(cu - cv) <= tols.level_match * max(1.0, abs(cu)):
                item3_pair = (u, v)
                break
        if item3_pair:
            break
    return Prop1Classification(
        True, resid, comm, gap_a, gap_b, item1, item2, tuple(hits),
        item3_pair is not None, item3_pair,
    )
