"""The adjoint-symmetry argument for Hermitian positive definite pairs."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..config import DEFAULT, Tolerances
from ..errors import NotHermitianPDError
from ..linalg import as_matrix, fro
from ..matfun import mat_exp, mat_log_principal


@dataclass(frozen=True)
class Prop4Result:
    log_x_hermitian: bool
    log_y_hermitian: bool
    identity_residual: float
    exp_commutator: float
    xy_commutator: float
    identity_holds: bool
    chain_holds: bool

    def to_json(self) -> dict:
        return dict(self.__dict__)


def _check_hpd(m: np.ndarray, name: str, tols: Tolerances):
    if fro(m - m.conj().T) > tols.hermitian * max(1.0, fro(m)):
        raise NotHermitianPDError(f"{name} is not Hermitian")
    if np.linalg.eigvalsh(0.5 * (m + m.conj().T)).min() <= 0.0:
        raise NotHermitianPDError(f"{name} is not positive definite")


def verify_prop4_structure(x, y, tols: Tolerances = DEFAULT) -> Prop4Result:
    """Check: log x, log y Hermitian; e^(a+b) = e^a e^b forces e^a e^b = e^b e^a and xy = yx.

    When the identity fails the implications hold vacuously.
    """
    x, y = as_matrix(x), as_matrix(y)
    _check_hpd(x, "x", tols)
    _check_hpd(y, "y", tols)
    a, b = mat_log_principal(x, tols), mat_log_principal(y, tols)
    herm_tol = 1e-10
    ah = fro(a - a.conj().T) <= herm_tol * max(1.0, fro(a))
    bh = fro(b - b.conj().T) <= herm_tol * max(1.0, fro(b))
    ea, eb = mat_exp(a, tols), mat_exp(b, tols)
    scale = fro(ea @ eb)
    ident = fro(mat_exp(a + b, tols) - ea @ eb) / scale
    ecomm = fro(ea @ eb - eb @ ea) / scale
    xycomm = fro(x @ y - y @ x) / (fro(x) * fro(y))
    holds = ident <= tols.identity
    chain = (not holds) or (ecomm <= 2.0 * tols.identity and xycomm <= 2.0 * tols.identity + 1e-12)
    return Prop4Result(bool(ah), bool(bh), float(ident), float(ecomm), float(xycomm),
                       bool(holds), bool(chain))
