"""The log-law residual ``log(xy) - log(x) - log(y)`` and its verdict."""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from ..config import DEFAULT, Tolerances
from ..linalg import as_matrix, fro
from ..errors import DimensionError, MatlogError
from ..matfun import log_with_cut


class Verdict(str, enum.Enum):
    LAW_HOLDS_COMMUTING = "LAW_HOLDS_COMMUTING"
    LAW_HOLDS_NONCOMMUTING = "LAW_HOLDS_NONCOMMUTING"
    LAW_FAILS = "LAW_FAILS"
    INAPPLICABLE = "INAPPLICABLE"


@dataclass(frozen=True)
class LawReport:
    law_residual: float
    commutator_norm: float
    cut_distances: tuple  # (x, y, xy)
    verdict: Verdict
    low_confidence: bool = False
    seed: object = None
    trial: int | None = None

    def to_json(self) -> dict:
        return {
            "law_residual": self.law_residual,
            "commutator_norm": self.commutator_norm,
            "cut_distances": list(self.cut_distances),
            "verdict": self.verdict.value,
            "low_confidence": self.low_confidence,
            "seed": self.seed,
            "trial": self.trial,
        }


def normalized_commutator(x: np.ndarray, y: np.ndarray) -> float:
    scale = fro(x) * fro(y)
    return fro(x @ y - y @ x) / scale if scale > 0 else 0.0


def log_law_report(x, y, tols: Tolerances = DEFAULT, seed=None, trial=None) -> LawReport:
    """Evaluate whether ``log(xy) = log(x) + log(y)`` and whether x, y commute.

    The law residual is normalised by ``|log x|_F + |log y|_F + 1`` and the
    commutator by ``|x|_F |y|_F``.
    """
    x, y = as_matrix(x), as_matrix(y)
    if x.shape != y.shape:
        raise DimensionError(f"dimension mismatch: {x.shape} vs {y.shape}")
    xy = x @ y
    comm = normalized_commutator(x, y)
    try:
        cx, lx = log_with_cut(x, tols)
        cy, ly = log_with_cut(y, tols)
        cxy, lxy = log_with_cut(xy, tols)
    except MatlogError:
        return LawReport(float("inf"), comm, (0.0, 0.0, 0.0), Verdict.INAPPLICABLE,
                         seed=seed, trial=trial)
    dists = (cx.min_cut_distance, cy.min_cut_distance, cxy.min_cut_distance)
    low = min(dists) < tols.low_confidence_cut
    if lx is None or ly is None or lxy is None:
        return LawReport(float("inf"), comm, dists, Verdict.INAPPLICABLE, low, seed, trial)
    residual = fro(lxy - lx - ly) / (fro(lx) + fro(ly) + 1.0)
    if residual <= tols.law:
        verdict = (Verdict.LAW_HOLDS_COMMUTING if comm <= tols.commuting
                   else Verdict.LAW_HOLDS_NONCOMMUTING)
    else:
        verdict = Verdict.LAW_FAILS
    return LawReport(residual, comm, dists, verdict, low, seed, trial)
