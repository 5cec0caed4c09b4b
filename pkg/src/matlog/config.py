"""Central tolerance record.

Every numerical threshold used by the package lives here so that reports can
embed the effective configuration and the CLI can override entries by name.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    # linalg
    unitarity: float = 1e-12
    reconstruction: float = 1e-11
    deflation: float = 1e-14
    schur_iter_factor: int = 100
    inverse_floor: float = 1e-13
    # matfun
    cut: float = 1e-12
    low_confidence_cut: float = 1e-6
    exp_norm_budget: float = 700.0
    log_sqrt_target: float = 0.25
    log_max_sqrts: int = 64
    phi_solve_threshold: float = 0.1
    cluster_radius: float = 1e-6
    max_multiplicity: int = 8
    # scalar
    boundary_floor: float = 1e-10
    window_clearance: float = 1e-6
    integrality: float = 1e-3
    newton_steps: int = 50
    newton_step_tol: float = 1e-14
    root_residual: float = 1e-12
    root_separation: float = 1e-6
    companion_level: float = 1e-12
    # laws
    law: float = 1e-8
    commuting: float = 1e-8
    borderline_lo: float = 1e-9
    borderline_hi: float = 1e-7
    identity: float = 1e-8
    pivot: float = 1e-10
    item_match: float = 1e-6
    gap_lattice: float = 1e-8
    level_match: float = 1e-8
    noncommuting_floor: float = 1e-2
    counterexample: float = 1e-8
    hermitian: float = 1e-12

    def replace(self, **overrides) -> "Tolerances":
        """Return a copy with named entries replaced; unknown names raise KeyError."""
        known = {f.name: f for f in dataclasses.fields(self)}
        clean = {}
        for name, value in overrides.items():
            if name not in known:
                raise KeyError(f"unknown tolerance {name!r}")
            ftype = known[name].type
            clean[name] = int(value) if ftype in ("int", int) else float(value)
        return dataclasses.replace(self, **clean)

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)


DEFAULT = Tolerances()
