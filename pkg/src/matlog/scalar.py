"""Scalar complex analysis around f(z) = e^z - lambda*z - 1.

Zero counts come from the argument principle, evaluated by accumulating the
phase of f along the boundary of a rectangle.  Sampling is refined until
consecutive phase increments stay below pi/4, so the unwrapped total is an
exact multiple of 2*pi.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT, Tolerances
from .errors import BoundaryTooCloseError, CountMismatchError, NoValidWindowError
from .linalg import as_scalar

TWO_PI = 2.0 * math.pi
_MAX_BOUNDARY_POINTS = 2_000_000


def expm1c(z: complex) -> complex:
    """``e^z - 1`` without cancellation for small ``|z|``."""
    x, y = z.real, z.imag
    re = math.expm1(x) * math.cos(y) - 2.0 * math.sin(0.5 * y) ** 2
    im = math.exp(x) * math.sin(y)
    return complex(re, im)


def phi_scalar(z) -> complex:
    """phi(z) = (e^z - 1)/z with phi(0) = 1."""
    z = as_scalar(z)
    if abs(z) < 1e-3:
        # Taylor: sum z^k/(k+1)!
        total, term = 1.0 + 0j, 1.0 + 0j
        for k in range(1, 8):
            term *= z / (k + 1)
            total += term
        return total
    return expm1c(z) / z


# ---------------------------------------------------------------- rectangles


@dataclass(frozen=True)
class Rectangle:
    re_min: float
    re_max: float
    im_min: float
    im_max: float

    def __post_init__(self):
        vals = (self.re_min, self.re_max, self.im_min, self.im_max)
        if not all(math.isfinite(v) for v in vals):
            raise ValueError("rectangle bounds must be finite")
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise ValueError(f"degenerate rectangle {vals}")

    def contains(self, z: complex, margin: float = 0.0) -> bool:
        return (self.re_min + margin < z.real < self.re_max - margin
                and self.im_min + margin < z.imag < self.im_max - margin)

    def distance_to(self, z: complex) -> float:
        dx = max(self.re_min - z.real, 0.0, z.real - self.re_max)
        dy = max(self.im_min - z.imag, 0.0, z.imag - self.im_max)
        return math.hypot(dx, dy)

    def shifted(self, d_re: float, d_im: float) -> "Rectangle":
        return Rectangle(self.re_min + d_re, self.re_max + d_re,
                         self.im_min + d_im, self.im_max + d_im)

    def to_json(self) -> dict:
        return {"re": [self.re_min, self.re_max], "im": [self.im_min, self.im_max]}

    @classmethod
    def from_json(cls, obj: dict) -> "Rectangle":
        return cls(float(obj["re"][0]), float(obj["re"][1]),
                   float(obj["im"][0]), float(obj["im"][1]))


@dataclass(frozen=True)
class ZeroCensus:
    lambda_: complex
    rect: Rectangle
    count: int
    boundary_min_abs: float
    segments: int
    raw_winding: float


def _exp_poly(lam: complex):
    def f(z):
        return np.exp(z) - lam * z - 1.0
    return f


def _edges(rect: Rectangle):
    # counterclockwise: bottom, right, top, left
    c0 = complex(rect.re_min, rect.im_min)
    c1 = complex(rect.re_max, rect.im_min)
    c2 = complex(rect.re_max, rect.im_max)
    c3 = complex(rect.re_min, rect.im_max)
    return [(c0, c1), (c1, c2), (c2, c3), (c3, c0)]


def _edge_phase(f, start: complex, end: complex, tols: Tolerances):
    """Refine samples on one edge; return (phase change, min |f|, samples)."""
    length = abs(end - start)
    t = np.linspace(0.0, 1.0, max(33, int(16 * length) + 1))
    vals = f(start + t * (end - start))
    mid_vals = vals
    if np.abs(vals).min() < tols.boundary_floor:
        t = t[:0]
    while len(t):
        dphi = np.angle(vals[1:] / vals[:-1])
        bad = np.abs(dphi) >= math.pi / 4
        if not bad.any():
            return float(dphi.sum()), float(np.abs(vals).min()), len(t) - 1
        if len(t) > _MAX_BOUNDARY_POINTS:
            raise BoundaryTooCloseError("boundary refinement exceeded point budget",
                                        min_abs=float(np.abs(vals).min()))
        mids = 0.5 * (t[:-1][bad] + t[1:][bad])
        mid_vals = f(start + mids * (end - start))
        if np.abs(mid_vals).min() < tols.boundary_floor:
            break
        t = np.concatenate([t, mids])
        vals = np.concatenate([vals, mid_vals])
        order = np.argsort(t, kind="stable")
        t, vals = t[order], vals[order]
    raise BoundaryTooCloseError(
        f"|f| = {np.abs(mid_vals).min():.3e} on the boundary, below floor {tols.boundary_floor:g}",
        min_abs=float(np.abs(mid_vals).min()),
    )


def _winding(f, rect: Rectangle, tols: Tolerances, lam: complex = 0j) -> ZeroCensus:
    total = 0.0
    min_abs = math.inf
    segments = 0
    for start, end in _edges(rect):
        try:
            dphi, m, nseg = _edge_phase(f, start, end, tols)
        except BoundaryTooCloseError as exc:
            exc.suggestion = rect.shifted(0.0137, 0.0291)
            raise
        total += dphi
        min_abs = min(min_abs, m)
        segments += nseg
    if min_abs < tols.boundary_floor:
        raise BoundaryTooCloseError(
            f"|f| = {min_abs:.3e} on the boundary, below floor {tols.boundary_floor:g}",
            min_abs=min_abs, suggestion=rect.shifted(0.0137, 0.0291),
        )
    raw = total / TWO_PI
    count = int(round(raw))
    if abs(raw - count) > tols.integrality:
        raise BoundaryTooCloseError(f"non-integral winding {raw!r}", min_abs=min_abs)
    return ZeroCensus(lam, rect, count, min_abs, segments, raw)


def winding_zero_count(lambda_, rect: Rectangle, tols: Tolerances = DEFAULT) -> ZeroCensus:
    """Number of zeros of e^z - lambda*z - 1 inside *rect*, with multiplicity."""
    lam = as_scalar(lambda_)
    if rect.re_max > 700.0:
        raise ValueError("rectangle extends past the double-precision range of exp")
    return _winding(_exp_poly(lam), rect, tols, lam)


# ---------------------------------------------------------------- Newton


def newton_many(f, df, seeds, tols: Tolerances = DEFAULT):
    """Vectorised Newton; returns converged roots (diverged seeds dropped)."""
    z = np.asarray(seeds, dtype=np.complex128).copy()
    active = np.ones(z.shape, dtype=bool)
    done = np.zeros(z.shape, dtype=bool)
    with np.errstate(all="ignore"):
        for _ in range(tols.newton_steps):
            if not active.any():
                break
            za = z[active]
            step = f(za) / df(za)
            bad = ~np.isfinite(step) | (np.abs(za) > 1e6)
            za = za - step
            z[active] = za
            conv = np.abs(step) < tols.newton_step_tol * (1.0 + np.abs(za))
            idx = np.flatnonzero(active)
            done[idx[conv & ~bad]] = True
            active[idx[conv | bad]] = False
    return z[done]


def _dedupe(roots, sep: float):
    out: list[complex] = []
    for r in sorted((complex(r) for r in roots), key=lambda w: (w.imag, w.real)):
        if all(abs(r - s) > sep for s in out):
            out.append(r)
    return out


# ---------------------------------------------------------------- the set U


@dataclass(frozen=True)
class URootScan:
    band: Rectangle
    roots: tuple
    census_count: int
    residuals: tuple


def default_u_band(count: int) -> Rectangle:
    return Rectangle(-2.0, 20.0, 0.5, max(30.0, TWO_PI * (count + 1)))


def _cells(band: Rectangle, offset: float):
    def cuts(lo, hi):
        pts = [lo]
        x = math.floor(lo) + offset
        while x < hi:
            if x > lo + 1e-9:
                pts.append(x)
            x += 1.0
        pts.append(hi)
        return pts
    xs, ys = cuts(band.re_min, band.re_max), cuts(band.im_min, band.im_max)
    for x0, x1 in zip(xs[:-1], xs[1:]):
        for y0, y1 in zip(ys[:-1], ys[1:]):
            if x1 - x0 > 1e-9 and y1 - y0 > 1e-9:
                yield Rectangle(x0, x1, y0, y1)


def scan_u_roots(band: Rectangle, tols: Tolerances = DEFAULT) -> URootScan:
    """All roots of e^u = 1 + u in *band*: cell census, then Newton per cell."""
    if band.distance_to(0j) < 0.5:
        raise ValueError("band must exclude the disc |z| < 0.5 around the trivial root 0")
    f = _exp_poly(1.0)

    def df(z):
        return np.exp(z) - 1.0

    total = winding_zero_count(1.0, band, tols)
    for offset in (0.0371, 0.2113, 0.4427, 0.6791):
        try:
            found: list[complex] = []
            for cell in _cells(band, offset):
                census = _winding(f, cell, tols, 1.0 + 0j)
                if census.count == 0:
                    continue
                g = np.linspace(0.1, 0.9, 5)
                seeds = [complex(cell.re_min + (cell.re_max - cell.re_min) * a,
                                 cell.im_min + (cell.im_max - cell.im_min) * b)
                         for a in g for b in g]
                roots = [r for r in newton_many(f, df, seeds, tols) if cell.contains(r)]
                found.extend(_dedupe(roots, tols.root_separation))
            break
        except BoundaryTooCloseError:
            continue
    else:
        raise BoundaryTooCloseError("every cell grid offset hit a root on a cell boundary")
    roots = sorted(_dedupe(found, tols.root_separation), key=lambda w: (abs(w.imag), w.real))
    if len(roots) != total.count:
        raise CountMismatchError(
            f"Newton found {len(roots)} roots but the census counts {total.count}",
            census=total.count, found=len(roots),
        )
    residuals = tuple(abs(cmath.exp(r) - 1.0 - r) for r in roots)
    return URootScan(band, tuple(roots), total.count, residuals)


def solve_u_set(count: int, search_band: Rectangle | None = None,
                tols: Tolerances = DEFAULT) -> list[complex]:
    """First *count* nonzero roots of e^u = 1 + u in the band, sorted by |Im u|."""
    if count < 1:
        raise ValueError("count must be positive")
    band = search_band if search_band is not None else default_u_band(count)
    return list(scan_u_roots(band, tols).roots[:count])


def u_set_reference(count: int, tols: Tolerances = DEFAULT) -> list[complex]:
    """Upper-half-plane U roots with their conjugates, for membership tests."""
    upper = solve_u_set(count, tols=tols)
    return upper + [r.conjugate() for r in upper]


# ---------------------------------------------------------------- level sets of phi


@dataclass(frozen=True)
class CompanionPair:
    u: complex
    v: complex
    level: complex
    residual: float


def companions(u, band: Rectangle, grid_step: float = 0.5,
               tols: Tolerances = DEFAULT) -> list[CompanionPair]:
    """Distinct nonzero v in *band* with phi(v) = phi(u)."""
    u = as_scalar(u)
    if u == 0:
        raise ValueError("u must be nonzero")
    c = phi_scalar(u)
    if abs(c) == 0.0:
        raise ValueError("phi(u) = 0; level set excluded")
    if grid_step <= 0:
        raise ValueError("grid_step must be positive")

    def g(z):
        return np.exp(z) - c * z - 1.0

    def dg(z):
        return np.exp(z) - c

    xs = np.arange(band.re_min + 0.5 * grid_step, band.re_max, grid_step)
    ys = np.arange(band.im_min + 0.5 * grid_step, band.im_max, grid_step)
    seeds = (xs[None, :] + 1j * ys[:, None]).ravel()
    pairs = []
    for v in _dedupe(newton_many(g, dg, seeds, tols), tols.root_separation):
        if not band.contains(v):
            continue
        if abs(v) <= tols.root_separation or abs(v - u) <= tols.root_separation:
            continue
        res = abs(phi_scalar(v) - c)
        if res <= tols.companion_level * max(1.0, abs(c)):
            pairs.append(CompanionPair(u, v, c, res))
    return pairs


# ---------------------------------------------------------------- window check


@dataclass(frozen=True)
class WindowVerdict:
    u: complex
    lambda_: complex
    a: float
    r: float
    census: ZeroCensus
    attempts: int

    @property
    def count(self) -> int:
        return self.census.count

    @property
    def passed(self) -> bool:
        return self.census.count == 2


def _window_offsets(im_u: float, n: int = 48):
    centre = math.pi - 0.5 * im_u
    step = TWO_PI / n
    out = []
    for k in range(n):
        a = centre + (k + 1) // 2 * step * (1 if k % 2 else -1)
        if 0.0 < a < TWO_PI and -a < im_u < TWO_PI - a:
            out.append(a)
    return out


def verify_prop2_window(u, tols: Tolerances = DEFAULT) -> WindowVerdict:
    """Count zeros of e^z - phi(u) z - 1 in a strip window of height 2*pi.

    The window [-r, r] x [-a, 2*pi - a] contains 0 and u; the expected count
    is exactly two.
    """
    u = as_scalar(u)
    if not abs(u.imag) < TWO_PI:
        raise ValueError("requires |Im u| < 2*pi")
    if abs(u) < 0.5:
        raise ValueError("requires |u| >= 0.5")
    lam = phi_scalar(u)
    r = max(10.0, abs(u.real) + 5.0)
    f = _exp_poly(lam)
    attempts = 0
    for a in _window_offsets(u.imag):
        attempts += 1
        rect = Rectangle(-r, r, -a, TWO_PI - a)
        try:
            census = _winding(f, rect, tols, lam)
        except BoundaryTooCloseError:
            continue
        if census.boundary_min_abs > tols.window_clearance:
            return WindowVerdict(u, lam, a, r, census, attempts)
    raise NoValidWindowError(f"no window offset clears the zeros of f for u = {u}")
