"""Phase classification, h-polynomial, density, endpoint solving."""

from fractions import Fraction as F

import mpmath
import pytest

from largen.errors import (
    NoAdmissibleRoot,
    NoTwoCutSolution,
    OutsideSupport,
    Unclassifiable,
)
from largen.phase import (
    classify_phase,
    compute_h,
    density,
    phase_scan,
    solve_one_cut,
    solve_two_cut,
)
from largen.potential import Potential, parse_potential

QUARTIC = parse_potential("quartic:-2,1")
BMP = Potential.bmp()
GAUSS = Potential.gaussian()
SEXTIC = parse_potential("sextic:42,-11,1")


class TestSolveOneCut:
    def test_gaussian(self):
        assert solve_one_cut(GAUSS, F(1)) == F(1, 2)

    def test_bmp_t120(self):
        assert solve_one_cut(BMP, F(120)) == F(2)

    def test_quartic_closed_form(self):
        # r0 = (sqrt(g2²+12·T·g4) − g2)/(12·g4) for g2=1, g4=1, T=11/12
        g = parse_potential("quartic:1,1")
        # 1 + 12·(11/12) = 12... pick T so the square root is rational: T = 4/3 → disc 17? use T=2: disc 25
        r0 = solve_one_cut(g, F(2))
        assert r0 == (F(5) - 1) / 12

    def test_inadmissible_below_merging(self):
        # quartic (−2,1) below T_c=1: one-cut root exists but density dips negative
        with pytest.raises(NoAdmissibleRoot):
            solve_one_cut(QUARTIC, F(1, 2))

    def test_multi_root_selection(self):
        # hodograph with local max/min: smallest admissible root is the
        # branch continuous from T → 0⁺
        r0 = solve_one_cut(SEXTIC, F(13))
        assert 0 < r0 and r0 < 7.0 / 15.0


class TestSolveTwoCut:
    def test_exact_rational_point(self):
        assert solve_two_cut(QUARTIC, F(3, 4)) == (F(3, 4), F(1, 4))

    def test_sum_is_temperature_independent(self):
        # a0 + b0 = −g2/(2·g4) regardless of T
        for T in (F(1, 4), F(1, 2), F(3, 4)):
            a0, b0 = solve_two_cut(QUARTIC, T)
            assert abs(float(a0) + float(b0) - 1.0) < 1e-12

    def test_ordering(self):
        a0, b0 = solve_two_cut(QUARTIC, F(1, 2))
        assert a0 > b0 > 0

    def test_one_cut_region_rejected(self):
        with pytest.raises(NoTwoCutSolution):
            solve_two_cut(QUARTIC, F(2))

    def test_collapse_approaching_merging(self):
        eps = F(1, 10**6)
        a0, b0 = solve_two_cut(QUARTIC, 1 - eps)
        # disc = 4e-6 has a rational square root: both endpoints exact
        assert a0 == F(1, 2) + F(1, 2000)
        assert b0 == F(1, 2) - F(1, 2000)


class TestComputeH:
    def test_gaussian_constant(self):
        assert list(compute_h(GAUSS, (0, 2)).coeffs) == [F(2)]

    def test_quartic_one_cut_form(self):
        # h̃ = 4·g4·λ + 2·g2 + 8·g4·r0 with r0 = 1
        h = compute_h(QUARTIC, (0, 4))
        assert list(h.coeffs) == [F(4), F(4)]

    def test_endpoint_value_is_hodograph_slope(self):
        for g, r0 in [(QUARTIC, F(2)), (BMP, F(1, 3)), (SEXTIC, F(1, 7))]:
            h = compute_h(g, (0, 4 * r0))
            assert h(4 * r0) == g.hodograph().derivative()(r0)

    def test_bmp_critical_endpoint_zero(self):
        h = compute_h(BMP, (0, 4))
        assert h(F(4)) == 0  # W'(1) = 0
        # double zero: criticality of order 3
        assert h.derivative()(F(4)) == 0

    def test_two_cut_constant(self):
        # quartic two-cut: h̃ = 4·g4
        h = compute_h(QUARTIC, (F(1, 4), F(9, 4)))
        assert list(h.coeffs) == [F(4)]


class TestClassify:
    def test_quartic_below_critical(self):
        p = classify_phase(QUARTIC, F(1, 2))
        assert (p.s, p.status) == (2, "regular")
        assert p.a0 > p.b0 > 0

    def test_quartic_at_merging(self):
        p = classify_phase(QUARTIC, F(1))
        assert p.status == "critical"
        assert p.s == 1 and p.r0 == F(1, 2)

    def test_quartic_above_critical(self):
        p = classify_phase(QUARTIC, F(2))
        assert (p.s, p.status) == (1, "regular")

    def test_bmp_regular_below(self):
        p = classify_phase(BMP, F(30))
        assert (p.s, p.status) == (1, "regular")

    def test_bmp_critical(self):
        p = classify_phase(BMP, F(60))
        assert p.status == "critical" and p.r0 == F(1)

    def test_branch_critical_interior_maximum(self):
        p = classify_phase(SEXTIC, F(3724, 225))
        assert p.status == "critical" and p.r0 == F(7, 15)

    def test_support_splitting_beyond_two_cuts(self):
        with pytest.raises(Unclassifiable):
            classify_phase(SEXTIC, F(20))

    def test_gaussian_always_one_cut(self):
        for T in (F(1, 2), F(1), F(10)):
            p = classify_phase(GAUSS, T)
            assert (p.s, p.status) == (1, "regular")
            assert p.r0 == T / 2


class TestDensity:
    def test_semicircle(self):
        p = classify_phase(GAUSS, F(1))
        with mpmath.workdps(30):
            val = density(GAUSS, p, 0)
            assert abs(val - mpmath.sqrt(2) / mpmath.pi) < mpmath.mpf(10) ** -20

    def test_normalization_one_cut(self):
        p = classify_phase(GAUSS, F(1))
        with mpmath.workdps(30):
            alpha = mpmath.sqrt(mpmath.mpf(2))
            mass = mpmath.quad(lambda x: density(GAUSS, p, x), [-alpha, alpha])
            assert abs(mass - 1) < mpmath.mpf(10) ** -10

    def test_normalization_two_cut(self):
        p = classify_phase(QUARTIC, F(1, 2))
        with mpmath.workdps(30):
            a, b = (mpmath.sqrt(e) for e in p.endpoints)
            mass = 2 * mpmath.quad(lambda x: density(QUARTIC, p, x), [a, b])
            assert abs(mass - 1) < mpmath.mpf(10) ** -10

    def test_endpoint_vanishes(self):
        p = classify_phase(GAUSS, F(1))
        with mpmath.workdps(30):
            assert density(GAUSS, p, mpmath.sqrt(2)) == 0

    def test_positive_on_sample_grid(self):
        # strictness of the density inequality on ≥100 interior points
        for g, T in [(QUARTIC, F(2)), (BMP, F(30))]:
            p = classify_phase(g, T)
            with mpmath.workdps(25):
                alpha = mpmath.sqrt(p.endpoints[1])
                for k in range(1, 101):
                    x = -alpha + 2 * alpha * mpmath.mpf(k) / 102
                    assert density(g, p, x) > 0
        p = classify_phase(QUARTIC, F(1, 2))
        with mpmath.workdps(25):
            a, b = (mpmath.sqrt(e) for e in p.endpoints)
            for k in range(1, 101):
                x = a + (b - a) * mpmath.mpf(k) / 102
                assert density(QUARTIC, p, x) > 0

    def test_outside_support_raises(self):
        p = classify_phase(GAUSS, F(1))
        with pytest.raises(OutsideSupport):
            density(GAUSS, p, 2)
        p2 = classify_phase(QUARTIC, F(1, 2))
        with pytest.raises(OutsideSupport):
            density(QUARTIC, p2, 0)  # spectral gap

    def test_bmp_edge_exponent(self):
        # ρ(x) ~ (α - x)^{m - 1/2} with m = 3 at the third-order point:
        # local log-log slope 5/2 ± 0.1
        p = classify_phase(BMP, F(60))
        with mpmath.workdps(40):
            alpha = mpmath.sqrt(p.endpoints[1])
            d1 = density(BMP, p, alpha * (1 - mpmath.mpf(10) ** -6))
            d2 = density(BMP, p, alpha * (1 - mpmath.mpf(10) ** -8))
            slope = mpmath.log(d1 / d2) / mpmath.log(mpmath.mpf(100))
            assert abs(slope - mpmath.mpf(5) / 2) < mpmath.mpf("0.1")


class TestMergingContinuity:
    def test_closed_forms_meet(self):
        # one-cut r0 at T_c equals the collapsed two-cut endpoints exactly
        assert solve_one_cut(QUARTIC, F(1)) == F(1, 2)
        g2, g4 = QUARTIC.gs
        Tc = g2 * g2 / (4 * g4)
        assert Tc == 1
        # closed-form two-cut endpoints at T_c (discriminant zero)
        assert (-g2) / (4 * g4) == F(1, 2)


class TestScan:
    def test_quartic_sweep_statuses(self):
        rows = phase_scan(QUARTIC, [F(1, 2), F(1), F(2)])
        assert [r["s"] for r in rows] == [2, 1, 1]
        assert [r["status"] for r in rows] == ["regular", "critical", "regular"]

    def test_invalid_row(self):
        rows = phase_scan(SEXTIC, [F(20)])
        assert rows[0]["status"] == "invalid" and rows[0]["s"] == 0
