import cmath
import math

import mpmath
import numpy as np
import pytest
import scipy.special
from hypothesis import given, strategies as st

from matlog.config import DEFAULT
from matlog.errors import BoundaryTooCloseError
from matlog.scalar import (
    TWO_PI,
    Rectangle,
    companions,
    default_u_band,
    phi_scalar,
    scan_u_roots,
    solve_u_set,
    u_set_reference,
    verify_prop2_window,
    winding_zero_count,
)

# first five upper-half-plane solutions of e^u = 1 + u, frozen from the
# census + Newton scan and cross-checked against the Lambert-W oracle below
U_FROZEN = [
    2.0888430156130435 + 7.461489285654254j,
    2.664068142429071 + 13.87905600274681j,
    3.026296955077878 + 20.223834997330446j,
    3.2916783402894128 + 26.543238507370212j,
    3.501268996883455 + 32.850548228148774j,
]


def _lambertw_roots(count):
    # e^u = 1 + u  <=>  u = -W_k(-1/e) - 1 on the branches k = -2, -3, ...
    return [complex(-scipy.special.lambertw(-math.exp(-1), k) - 1) for k in range(-2, -2 - count, -1)]


def _argument_principle(lam, rect):
    # independent count: (1/2 pi i) * contour integral of f'/f, adaptive quadrature
    f = lambda z: mpmath.exp(z) - lam * z - 1
    df = lambda z: mpmath.exp(z) - lam
    corners = [complex(rect.re_min, rect.im_min), complex(rect.re_max, rect.im_min),
               complex(rect.re_max, rect.im_max), complex(rect.re_min, rect.im_max)]
    mpmath.mp.dps = 20
    total = 0
    for a, b in zip(corners, corners[1:] + corners[:1]):
        total += mpmath.quad(lambda t: df(a + t * (b - a)) / f(a + t * (b - a)) * (b - a), [0, 0.25, 0.5, 0.75, 1])
    return complex(total / (2j * mpmath.pi))


class TestPhiScalar:
    def test_examples(self):
        assert phi_scalar(0) == 1
        z = 1e-9 * cmath.exp(0.7j)
        assert abs(phi_scalar(z) - (1 + z / 2)) <= 1e-15
        assert abs(phi_scalar(TWO_PI * 1j)) <= 1e-15

    @given(st.complex_numbers(max_magnitude=30, allow_nan=False, allow_infinity=False))
    def test_against_mpmath(self, z):
        mpmath.mp.dps = 40
        zz = mpmath.mpc(z.real, z.imag)
        ref = complex(mpmath.expm1(zz) / zz) if z != 0 else 1.0
        assert abs(phi_scalar(z) - ref) <= 1e-14 * abs(ref) + 1e-300

    def test_series_branch_edge(self):
        for r in (9.99e-4, 1.001e-3):
            z = r * cmath.exp(2.1j)
            mpmath.mp.dps = 40
            ref = complex(mpmath.expm1(mpmath.mpc(z)) / mpmath.mpc(z))
            assert abs(phi_scalar(z) - ref) <= 1e-15


class TestWinding:
    def test_unit_square_one_zero(self):
        assert winding_zero_count(0, Rectangle(-1, 1, -1, 1)).count == 1

    def test_tall_rectangle_three_zeros(self):
        c = winding_zero_count(0, Rectangle(-1, 1, -7, 7))
        assert c.count == 3
        assert abs(c.raw_winding - 3) <= DEFAULT.integrality
        assert c.boundary_min_abs > DEFAULT.boundary_floor
        assert c.segments > 0

    def test_prop2_window_example(self):
        lam = phi_scalar(1 + 1j)
        a = math.pi - 0.5
        assert winding_zero_count(lam, Rectangle(-10, 10, -a, TWO_PI - a)).count == 2

    def test_double_zero_counted_twice(self):
        # e^z - z - 1 has a double zero at the origin
        assert winding_zero_count(1, Rectangle(-1, 1, -1, 1)).count == 2

    def test_boundary_zero_rejected(self):
        with pytest.raises(BoundaryTooCloseError) as info:
            winding_zero_count(0, Rectangle(0, 1, -1, 1))
        assert info.value.suggestion is not None

    @pytest.mark.parametrize("lam,rect", [
        (0.3 + 0.2j, Rectangle(-4, 6, -9.1, 11.3)),
        (2 - 1j, Rectangle(-3.3, 5.2, -2.1, 15.7)),
        (phi_scalar(3 - 2j), Rectangle(-8, 8, -4.9, 1.4)),
    ])
    def test_matches_contour_integral(self, lam, rect):
        ref = _argument_principle(lam, rect)
        assert abs(ref.imag) < 1e-6
        assert winding_zero_count(lam, rect).count == round(ref.real)

    def test_partition_additivity(self):
        lam = 0.7 - 0.4j
        whole = Rectangle(-5, 5, -3.17, 16.3)
        lower, upper = Rectangle(-5, 5, -3.17, 6.41), Rectangle(-5, 5, 6.41, 16.3)
        total = winding_zero_count(lam, whole).count
        assert total == winding_zero_count(lam, lower).count + winding_zero_count(lam, upper).count


class TestUSet:
    def test_frozen_against_lambertw(self):
        oracle = _lambertw_roots(5)
        for got, ref in zip(U_FROZEN, oracle):
            assert abs(got - ref) <= 1e-12

    def test_solver_reproduces_frozen(self):
        roots = solve_u_set(5)
        assert len(roots) == 5
        for got, ref in zip(roots, U_FROZEN):
            assert abs(got - ref) <= 1e-12
            assert abs(cmath.exp(got) - 1 - got) <= 1e-12
            assert abs(got.imag) > TWO_PI
        assert [abs(r.imag) for r in roots] == sorted(abs(r.imag) for r in roots)

    def test_scan_counts_agree(self):
        scan = scan_u_roots(default_u_band(5))
        assert scan.census_count == len(scan.roots)
        assert min(abs(a - b) for i, a in enumerate(scan.roots) for b in scan.roots[i + 1:]) > 1e-6

    def test_conjugate_band(self):
        band = Rectangle(-2, 20, -30, -0.5)
        roots = scan_u_roots(band).roots
        assert len(roots) == 4
        for r, ref in zip(roots, U_FROZEN):
            assert abs(r - ref.conjugate()) <= 1e-12

    def test_reference_includes_conjugates(self):
        ref = u_set_reference(3)
        assert len(ref) == 6
        assert all(any(abs(r.conjugate() - s) < 1e-14 for s in ref) for r in ref)

    def test_band_below_two_pi_is_empty(self):
        assert scan_u_roots(Rectangle(-2, 20, 0.5, TWO_PI)).roots == ()

    def test_band_must_exclude_origin(self):
        with pytest.raises(ValueError):
            scan_u_roots(Rectangle(-1, 1, -1, 1))


class TestCompanions:
    def test_real_u_has_companion(self):
        band = Rectangle(-10, 10, TWO_PI, 2 * TWO_PI)
        pairs = companions(1.0, band)
        assert len(pairs) >= 1
        assert winding_zero_count(phi_scalar(1.0), band).count == len(pairs)
        for p in pairs:
            assert abs(phi_scalar(p.v) - phi_scalar(1.0)) <= 1e-12
            assert abs(phi_scalar(p.v - p.u) - phi_scalar(-p.u)) <= 1e-10
            assert p.level != 0

    def test_u_itself_filtered(self):
        u = 0.4 + 1.1j
        band = Rectangle(-3, 3, -1, 3)
        assert all(abs(p.v - u) > 1e-6 for p in companions(u, band))

    def test_short_band_is_empty(self):
        # a band of height < 2 pi around Im u holds no companion
        for u in (1 + 1j, -0.7 + 2.5j, 2.2 - 0.3j):
            band = Rectangle(-15, 15, u.imag - 3.0, u.imag + 3.0)
            assert companions(u, band) == []

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            companions(0, Rectangle(-1, 1, 1, 2))


class TestProp2Window:
    @pytest.mark.parametrize("u", [1 + 1j, 3 - 2j, -4 + 5.5j, 0.5j, -0.6 - 6.2j])
    def test_count_two(self, u):
        v = verify_prop2_window(u)
        assert v.passed and v.count == 2
        assert -v.a < u.imag < TWO_PI - v.a
        assert -v.r < u.real < v.r

    def test_small_u_rejected(self):
        with pytest.raises(ValueError):
            verify_prop2_window(0.1)

    def test_tall_u_rejected(self):
        with pytest.raises(ValueError):
            verify_prop2_window(1 + 7j)
