"""Randomised searches for noncommuting pairs that satisfy the log law.

Each trial draws its own stream from ``(seed, trial)``; the report depends
only on (target, n, trials, seed, tolerances).  After sampling, a
derivative-free local descent on the law residual is started from the best
samples while keeping the pair in its class and above the commutator floor.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from ..config import DEFAULT, Tolerances
from ..errors import MatlogError
from ..linalg import fro
from .generators import (
    MIN_CUT,
    NORM_RANGE,
    gen_commuting_arg_pair,
    gen_commuting_hermitian_pd,
    min_cut_distance,
    random_dense,
    random_hermitian_pd,
    random_upper,
    trial_rng,
)
from .report import LawReport, Verdict, log_law_report, normalized_commutator

SEARCH_KEY = 1 << 40
CONTROL_KEY = 1 << 41


class Target(str, enum.Enum):
    THM1_2x2 = "thm1"
    THM2_TRIANGULAR = "thm2"
    PROP4_HERMITIAN_PD = "prop4"


@dataclass
class FalsifyReport:
    target: str
    n: int
    trials: int
    seed: int
    tolerances: dict
    sampled: int = 0
    filtered_commuting: int = 0
    inapplicable: int = 0
    verdicts: dict = field(default_factory=dict)
    min_law_residual_sampled: float = math.inf
    min_law_residual: float = math.inf
    argmin: dict | None = None
    argmin_trial: int | None = None
    histogram: dict = field(default_factory=dict)
    flags: list = field(default_factory=list)
    search: dict = field(default_factory=dict)
    controls: dict = field(default_factory=dict)
    rows: list = field(default_factory=list, repr=False)

    @property
    def violations(self) -> list:
        out = list(self.flags)
        bad = self.controls.get("failures", [])
        out.extend({"reason": "CONTROL_FAILED", "trial": t} for t in bad)
        return out

    @property
    def passed(self) -> bool:
        return not self.violations


def _sampler(target: Target):
    if target is Target.THM1_2x2:
        return random_dense
    if target is Target.THM2_TRIANGULAR:
        return random_upper
    return random_hermitian_pd


def _control_pair(target: Target, seed: int, idx: int, n: int):
    rng = trial_rng(seed, CONTROL_KEY, idx)
    if target is Target.PROP4_HERMITIAN_PD:
        return gen_commuting_hermitian_pd(rng, n)
    return gen_commuting_arg_pair(rng, n, triangular=target is Target.THM2_TRIANGULAR)


def _decade(r: float) -> str:
    if not math.isfinite(r):
        return "inf"
    if r <= 0.0:
        return "zero"
    return f"1e{int(math.floor(math.log10(r)))}"


def _in_class(target: Target, x: np.ndarray, y: np.ndarray, tols: Tolerances) -> bool:
    for m in (x, y):
        nf = fro(m)
        if not (NORM_RANGE[0] <= nf <= NORM_RANGE[1]):
            return False
        eig = np.diag(m) if target is Target.THM2_TRIANGULAR else np.linalg.eigvals(m)
        if min_cut_distance(eig) < MIN_CUT:
            return False
    return normalized_commutator(x, y) >= tols.noncommuting_floor


def _perturb(target: Target, rng: np.random.Generator, m: np.ndarray, step: float):
    n = m.shape[0]
    i, j = (int(v) for v in rng.integers(0, n, 2))
    if target is Target.THM2_TRIANGULAR and i > j:
        i, j = j, i
    d = complex(*rng.normal(size=2))
    d *= step / abs(d)
    out = m.copy()
    if target is Target.PROP4_HERMITIAN_PD:
        if i == j:
            out[i, i] += d.real
        else:
            out[i, j] += d
            out[j, i] += d.conjugate()
    else:
        out[i, j] += d
    return out


def _local_search(target, x, y, start_rep: LawReport, rng, iters: int, tols: Tolerances):
    best = (start_rep.law_residual, x, y)
    step = 0.05 * max(fro(x), fro(y))
    fails = 0
    for _ in range(iters):
        which = int(rng.integers(0, 2))
        base = best[1 + which]
        cand = _perturb(target, rng, base, step)
        improved = False
        for trial_m in (cand, 2 * base - cand):
            cx, cy = (trial_m, best[2]) if which == 0 else (best[1], trial_m)
            if not _in_class(target, cx, cy, tols):
                continue
            rep = log_law_report(cx, cy, tols)
            if rep.verdict is not Verdict.INAPPLICABLE and rep.law_residual < best[0]:
                best = (rep.law_residual, cx, cy)
                improved = True
                break
        if improved:
            fails = 0
        else:
            fails += 1
            if fails >= 10:
                step *= 0.5
                fails = 0
    return best


def falsify_theorem(target, trials: int, seed: int = 0, n: int | None = None,
                    tols: Tolerances = DEFAULT, controls: int | None = None,
                    search_starts: int = 5, search_iters: int = 200,
                    keep_rows: bool = False) -> FalsifyReport:
    """Sample the target class, keep noncommuting pairs, and minimise the law residual.

    Any noncommuting pair with law residual below ``tols.counterexample`` is
    flagged as a counterexample candidate.
    """
    target = Target(target)
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if target is Target.THM1_2x2:
        n = 2
    n = 3 if n is None else int(n)
    if n < 2:
        raise ValueError("n must be >= 2")
    sample = _sampler(target)
    rep = FalsifyReport(target.value, n, trials, int(seed), tols.as_dict())
    scored = []
    for t in range(trials):
        rng = trial_rng(seed, t)
        try:
            x, y = sample(rng, n), sample(rng, n)
        except MatlogError:
            rep.inapplicable += 1
            continue
        rep.sampled += 1
        comm = normalized_commutator(x, y)
        if comm < tols.noncommuting_floor:
            rep.filtered_commuting += 1
            continue
        lr = log_law_report(x, y, tols, seed=seed, trial=t)
        rep.verdicts[lr.verdict.value] = rep.verdicts.get(lr.verdict.value, 0) + 1
        if lr.verdict is Verdict.INAPPLICABLE:
            rep.inapplicable += 1
            continue
        key = _decade(lr.law_residual)
        rep.histogram[key] = rep.histogram.get(key, 0) + 1
        if keep_rows:
            rep.rows.append((t, lr.law_residual, lr.commutator_norm, lr.verdict.value))
        if lr.law_residual < tols.counterexample or lr.verdict is Verdict.LAW_HOLDS_NONCOMMUTING:
            rep.flags.append({"reason": "COUNTEREXAMPLE_CANDIDATE", "trial": t,
                              "law_residual": lr.law_residual, "stage": "sampling"})
        scored.append((lr.law_residual, t, x, y, lr))

    scored.sort(key=lambda s: (s[0], s[1]))
    if scored:
        rep.min_law_residual_sampled = scored[0][0]
        best = (scored[0][0], scored[0][2], scored[0][3], scored[0][1])
        starts = []
        for k, (res, t, x, y, lr) in enumerate(scored[:search_starts]):
            srng = trial_rng(seed, SEARCH_KEY, k)
            r_new, sx, sy = _local_search(target, x, y, lr, srng, search_iters, tols)
            starts.append({"trial": t, "from": res, "to": r_new})
            if r_new < best[0]:
                best = (r_new, sx, sy, t)
            if r_new < tols.counterexample:
                rep.flags.append({"reason": "COUNTEREXAMPLE_CANDIDATE", "trial": t,
                                  "law_residual": r_new, "stage": "search"})
        rep.min_law_residual = best[0]
        rep.argmin = {"x": best[1], "y": best[2]}
        rep.argmin_trial = best[3]
        rep.search = {"starts": starts, "iterations": search_iters}

    n_controls = max(1, trials // 100) if controls is None else controls
    failures = []
    for c in range(n_controls):
        cx, cy = _control_pair(target, seed, c, n)
        lr = log_law_report(cx, cy, tols)
        if lr.verdict is not Verdict.LAW_HOLDS_COMMUTING:
            failures.append(c)
    rep.controls = {"count": n_controls, "failures": failures}
    rep.histogram = dict(sorted(rep.histogram.items()))
    rep.verdicts = dict(sorted(rep.verdicts.items()))
    return rep
