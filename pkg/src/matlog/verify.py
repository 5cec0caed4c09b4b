"""Seeded verification suites behind ``matlog verify TARGET``.

Each suite returns a JSON-ready report dict whose ``violations`` list is
empty exactly when every checked property held.
"""
from __future__ import annotations

import math

import numpy as np

from . import __version__
from .config import DEFAULT, Tolerances
from .errors import MatlogError, NoValidWindowError
from .laws import (
    Verdict,
    classify_prop1,
    falsify_theorem,
    gen_commuting_arg_pair,
    gen_item3_pair,
    log_law_report,
    random_prop3_instance,
    trial_rng,
    verify_prop3,
)
from .laws.generators import unit_square
from .laws.prop3 import PROP3_KINDS
from .matfun import mat_exp
from .scalar import TWO_PI, Rectangle, companions, phi_scalar, verify_prop2_window

TARGETS = ("arg-law", "item3", "prop2", "prop3", "thm1", "thm2", "prop4")
DEFAULT_TRIALS = {
    "arg-law": 200, "item3": 50, "prop2": 100, "prop3": 200,
    "thm1": 10_000, "thm2": 10_000, "prop4": 10_000,
}
DEFAULT_NS = {"arg-law": (2, 3, 4), "prop3": (3, 4, 5), "thm1": (2,), "thm2": (3, 4), "prop4": (3,)}
ITEM3_IDENTITY = 1e-10
ITEM3_COMMUTATOR = 1e-3
PROP2_RESOLVE_FRACTION = 0.95


def _header(target: str, trials: int, seed: int, tols: Tolerances) -> dict:
    return {
        "command": f"verify {target}",
        "version": __version__,
        "seed": seed,
        "trials": trials,
        "tolerances": tols.as_dict(),
    }


def _finish(report: dict, violations: list) -> dict:
    report["violations"] = violations
    report["status"] = "FLAG" if violations else "PASS"
    return report


# ---------------------------------------------------------------- suites


def run_arg_law(trials: int, seed: int, tols: Tolerances = DEFAULT, ns=None) -> dict:
    ns = tuple(ns or DEFAULT_NS["arg-law"])
    report = _header("arg-law", trials, seed, tols)
    violations, verdicts = [], {}
    worst_law, worst_comm = 0.0, 0.0
    for t in range(trials):
        n = ns[t % len(ns)]
        x, y = gen_commuting_arg_pair(trial_rng(seed, t), n)
        lr = log_law_report(x, y, tols, seed=seed, trial=t)
        verdicts[lr.verdict.value] = verdicts.get(lr.verdict.value, 0) + 1
        worst_law = max(worst_law, lr.law_residual)
        worst_comm = max(worst_comm, lr.commutator_norm)
        if lr.verdict is not Verdict.LAW_HOLDS_COMMUTING:
            violations.append({"trial": t, "n": n, "reason": lr.verdict.value,
                               "law_residual": lr.law_residual})
    report.update(ns=list(ns), verdicts=dict(sorted(verdicts.items())),
                  max_law_residual=worst_law, max_commutator=worst_comm)
    return _finish(report, violations)


def draw_companion_pair(rng: np.random.Generator, tols: Tolerances = DEFAULT, attempts: int = 20):
    """Random u and its nearest companion v above the window of height 2*pi."""
    for _ in range(attempts):
        u = complex(rng.uniform(-2.0, 3.0), rng.uniform(-5.0, 5.0))
        if abs(u) < 0.5 or abs(phi_scalar(u)) < 1e-3:
            continue
        band = Rectangle(-12.0, 12.0, u.imag + 1.5 * math.pi, u.imag + 5.5 * math.pi)
        found = companions(u, band, tols=tols)
        if found:
            return found[0]
    raise MatlogError("no companion pair found")


def run_item3(trials: int, seed: int, tols: Tolerances = DEFAULT) -> dict:
    report = _header("item3", trials, seed, tols)
    violations = []
    max_id, min_comm = 0.0, math.inf
    law_verdicts: dict = {}
    for t in range(trials):
        rng = trial_rng(seed, t)
        pair = draw_companion_pair(rng, tols)
        lam, mu = 0.5 * unit_square(rng, 2)
        conj = None
        if t % 2:
            conj = np.eye(2) + 0.3 * unit_square(rng, (2, 2))
        inst = gen_item3_pair(pair.u, pair.v, lam, mu, conjugator=conj, tols=tols)
        cls = classify_prop1(inst.a, inst.b, tols)
        max_id = max(max_id, inst.identity_residual)
        min_comm = min(min_comm, inst.commutator_norm)
        if inst.identity_residual > ITEM3_IDENTITY:
            violations.append({"trial": t, "reason": "IDENTITY_RESIDUAL",
                               "value": inst.identity_residual})
        if inst.commutator_norm < ITEM3_COMMUTATOR:
            violations.append({"trial": t, "reason": "COMMUTATOR_FLOOR",
                               "value": inst.commutator_norm})
        if not cls.item3:
            violations.append({"trial": t, "reason": "ITEM3_NOT_DETECTED"})
        lr = log_law_report(mat_exp(inst.a, tols), mat_exp(inst.b, tols), tols)
        law_verdicts[lr.verdict.value] = law_verdicts.get(lr.verdict.value, 0) + 1
        if lr.verdict is Verdict.LAW_HOLDS_NONCOMMUTING:
            violations.append({"trial": t, "reason": "COUNTEREXAMPLE_CANDIDATE",
                               "law_residual": lr.law_residual})
    report.update(max_identity_residual=max_id, min_commutator=min_comm,
                  exp_pair_law_verdicts=dict(sorted(law_verdicts.items())))
    return _finish(report, violations)


def _draw_window_u(rng: np.random.Generator) -> complex:
    while True:
        u = complex(rng.uniform(-6.0, 6.0), rng.uniform(-TWO_PI + 0.05, TWO_PI - 0.05))
        if abs(u) >= 0.5:
            return u


def run_prop2(trials: int, seed: int, tols: Tolerances = DEFAULT, redraws: int = 3) -> dict:
    report = _header("prop2", trials, seed, tols)
    violations = []
    counts: dict = {}
    resolved = interference = 0
    for t in range(trials):
        rng = trial_rng(seed, t)
        for _ in range(redraws + 1):
            u = _draw_window_u(rng)
            try:
                verdict = verify_prop2_window(u, tols)
            except NoValidWindowError:
                interference += 1
                continue
            resolved += 1
            counts[str(verdict.count)] = counts.get(str(verdict.count), 0) + 1
            if not verdict.passed:
                violations.append({"trial": t, "u": u, "count": verdict.count,
                                   "reason": "THIRD_ZERO_IN_WINDOW"})
            break
    if resolved < math.ceil(PROP2_RESOLVE_FRACTION * trials):
        violations.append({"reason": "TOO_FEW_WINDOWS", "resolved": resolved})
    report.update(resolved=resolved, interference=interference,
                  counts=dict(sorted(counts.items())))
    return _finish(report, violations)


def run_prop3(trials: int, seed: int, tols: Tolerances = DEFAULT, ns=None) -> dict:
    ns = tuple(ns or DEFAULT_NS["prop3"])
    report = _header("prop3", trials, seed, tols)
    violations, borderline = [], []
    kinds: dict = {}
    with_pivot = 0
    for t in range(trials):
        rng = trial_rng(seed, t)
        n = ns[t % len(ns)]
        kind = PROP3_KINDS[t % len(PROP3_KINDS)]
        comp = None
        if kind == "exceptional":
            p = draw_companion_pair(rng, tols)
            comp = (p.u, p.v)
        inst = random_prop3_instance(rng, n, kind, companion=comp)
        res = verify_prop3(inst, tols)
        kinds[kind] = kinds.get(kind, 0) + 1
        for name, val in (("identity", res.identity_residual), ("cond6", res.cond6_residual)):
            if tols.borderline_lo <= val <= tols.borderline_hi:
                borderline.append({"trial": t, "which": name, "value": val})
        if res.identity_holds != res.cond6_holds:
            violations.append({"trial": t, "reason": "IDENTITY_COND6_DISAGREE",
                               "identity": res.identity_residual, "cond6": res.cond6_residual})
        if res.identity_holds and res.pivot_k is not None:
            with_pivot += 1
            if not (res.item4_holds or res.item5_holds):
                violations.append({"trial": t, "reason": "ITEMS_4_5_FAIL_AT_PIVOT",
                                   "pivot_k": res.pivot_k})
    report.update(ns=list(ns), kinds=dict(sorted(kinds.items())),
                  identity_with_pivot=with_pivot, borderline=borderline)
    return _finish(report, violations)


def run_falsify(target: str, trials: int, seed: int, tols: Tolerances = DEFAULT, ns=None,
                keep_rows: bool = False):
    ns = tuple(ns or DEFAULT_NS[target])
    report = _header(target, trials, seed, tols)
    runs, violations, rows, flags = [], [], [], []
    overall, argmin = math.inf, None
    for n in ns:
        rep = falsify_theorem(target, trials, seed, n=n, tols=tols, keep_rows=keep_rows)
        if rep.min_law_residual < overall:
            overall = rep.min_law_residual
            argmin = dict(rep.argmin, n=n, trial=rep.argmin_trial)
        flags.extend(dict(f, n=n) for f in rep.flags)
        violations.extend(dict(v, n=n) for v in rep.violations)
        rows.extend((n,) + r for r in rep.rows)
        runs.append({
            "n": rep.n,
            "sampled": rep.sampled,
            "filtered_commuting": rep.filtered_commuting,
            "inapplicable": rep.inapplicable,
            "verdicts": rep.verdicts,
            "min_law_residual_sampled": rep.min_law_residual_sampled,
            "min_law_residual": rep.min_law_residual,
            "argmin_trial": rep.argmin_trial,
            "argmin": rep.argmin,
            "histogram": rep.histogram,
            "search": rep.search,
            "controls": rep.controls,
            "flags": rep.flags,
        })
    report.update(ns=list(ns), min_law_residual=overall, flags=flags, argmin=argmin, runs=runs)
    return _finish(report, violations), rows


def run_target(target: str, trials: int | None = None, seed: int = 0,
               tols: Tolerances = DEFAULT, ns=None, keep_rows: bool = False):
    """Dispatch by target name; returns ``(report, csv_rows)``."""
    if target not in TARGETS:
        raise ValueError(f"unknown target {target!r}; expected one of {TARGETS}")
    trials = DEFAULT_TRIALS[target] if trials is None else trials
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if target == "arg-law":
        return run_arg_law(trials, seed, tols, ns), []
    if target == "item3":
        return run_item3(trials, seed, tols), []
    if target == "prop2":
        return run_prop2(trials, seed, tols), []
    if target == "prop3":
        return run_prop3(trials, seed, tols, ns), []
    return run_falsify(target, trials, seed, tols, ns, keep_rows)
