"""Hierarchy members at critical points: the Gel'fand–Dikii and Painlevé II
recursions, ODE emission in canonical form, and the series crosscheck."""

from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from largen.diffpoly import DiffPoly, XRelation
from largen.errors import Mismatch
from largen.onecut import OneCutCritical, find_critical
from largen.painleve import (
    CrosscheckReport,
    HierarchyMember,
    crosscheck_via_series,
    emit_critical_ode,
    gelfand_dikii,
    pii_hierarchy,
)
from largen.polys import RationalFunc
from largen.potential import Potential, parse_potential
from largen.twocut import MergingPoint, find_merging

BMP = Potential.bmp()
SEXTIC = parse_potential("sextic:42,-11,1")  # synthetic m = 2 one-cut point
MERGING = parse_potential("quartic:-2,1")
SEXTIC2 = parse_potential("sextic:-6,-3,1")  # m = 2 merging point
IRRATIONAL = parse_potential("sextic:3,-3,1")  # c_2 = -sqrt(6)

RHO = RationalFunc.var()
U = DiffPoly.var("u")


def gd_operator(R: DiffPoly) -> DiffPoly:
    """(ρ ∂³ + 4u ∂ + 2uₓ) applied to R."""
    return R.d_dx(3) * RHO + U * R.d_dx() * 4 + U.d_dx() * R * 2


def grading(p: DiffPoly) -> set:
    """Scaling weights of the monomials under u -> μ²u, x -> x/μ.

    A factor u^{(k)} picks up μ^{k+2}, so a monomial's weight is
    Σ e·(k+2) over its factors; homogeneity of R_m means a single weight.
    """
    return {sum(e * (o + 2) for _, o, e in mono) for mono in p.terms}


class TestGelfandDikii:
    def test_first_members(self):
        assert gelfand_dikii(0) == DiffPoly.const(1)
        assert gelfand_dikii(1) == U * 2
        assert gelfand_dikii(2) == U.d_dx(2) * (RHO * 2) + U**2 * 6

    def test_third_member_at_unit_radius(self):
        R3 = gelfand_dikii(3, 1)
        expected = (U.d_dx(4) + U * U.d_dx(2) * 10 + U.d_dx() ** 2 * 5 + U**3 * 10) * 2
        assert R3 == expected

    def test_recursion_is_exact_through_m_eight(self):
        # d/dx R_{m+1} must equal the operator image of R_m on the nose —
        # the recursion never needs a correction term.
        for m in range(8):
            assert gelfand_dikii(m + 1).d_dx() == gd_operator(gelfand_dikii(m))

    def test_no_integration_constants(self):
        for m in range(1, 9):
            assert gelfand_dikii(m).constant_term().is_zero()

    def test_homogeneous_grading(self):
        for m in range(1, 5):
            assert grading(gelfand_dikii(m)) == {2 * m}

    def test_negative_index_rejected(self):
        with pytest.raises(ValueError):
            gelfand_dikii(-1)

    @given(
        m=st.integers(min_value=0, max_value=4),
        rc=st.fractions(min_value=F(1, 10), max_value=F(10), max_denominator=12),
    )
    @settings(max_examples=20, deadline=None)
    def test_evaluation_commutes_with_recursion(self, m, rc):
        stepped = gd_operator(gelfand_dikii(m)).eval_rho(rc).integrate_x()
        assert stepped == gelfand_dikii(m + 1, rc)


class TestPIIHierarchy:
    def test_seed_pair(self):
        R0, S0 = pii_hierarchy(0)
        assert R0 == U * (RationalFunc.const(F(-1, 2)) / RHO)
        assert S0 == U**2 * (RationalFunc.const(F(-1, 8)) / RHO**2)

    def test_seed_compatibility(self):
        # 2ρ ∂ₓS₀ and u ∂ₓR₀ are both -u·uₓ/(2ρ)
        R0, S0 = pii_hierarchy(0)
        both = U * U.d_dx() * (RationalFunc.const(F(-1, 2)) / RHO)
        assert S0.d_dx() * (RHO * 2) == both
        assert U * R0.d_dx() == both

    def test_first_member(self):
        R1, S1 = pii_hierarchy(1)
        assert R1 == U.d_dx(2) * F(1, 2) + U**3 * (RationalFunc.const(F(-1, 4)) / RHO**2)
        expected_s = (
            U * U.d_dx(2) * (RationalFunc.const(F(1, 4)) / RHO)
            + U.d_dx() ** 2 * (RationalFunc.const(F(-1, 8)) / RHO)
            + U**4 * (RationalFunc.const(F(-3, 32)) / RHO**3)
        )
        assert S1 == expected_s

    def test_recursion_is_exact_through_m_six(self):
        for m in range(6):
            R, S = pii_hierarchy(m)
            Rn, Sn = pii_hierarchy(m + 1)
            assert Rn == R.d_dx(2) * (-RHO) + U * S * 2
            assert Sn.d_dx() * (RHO * 2) == U * Rn.d_dx()

    def test_numeric_radius_evaluates_both(self):
        R, S = pii_hierarchy(2, F(1, 2))
        Rs, Ss = pii_hierarchy(2)
        assert R == Rs.eval_rho(F(1, 2))
        assert S == Ss.eval_rho(F(1, 2))

    def test_negative_index_rejected(self):
        with pytest.raises(ValueError):
            pii_hierarchy(-3)


class TestEmission:
    def test_synthetic_sextic_second_member(self):
        crit = find_critical(SEXTIC)[0]
        member = emit_critical_ode(crit)
        assert member.family == "PI"
        assert (member.m, member.r_c, member.constant) == (2, F(7, 15), -8)
        expected = XRelation(U.d_dx(2) * 112 + U**2 * 720, DiffPoly.const(15))
        assert member.equation == expected
        assert member.S is None

    def test_bmp_third_member_with_its_sixth(self):
        crit = find_critical(BMP)[0]
        member = emit_critical_ode(crit)
        assert (member.family, member.m, member.r_c, member.constant) == ("PI", 3, 1, 3)
        expected = XRelation(
            U.d_dx(4) * 6 + U * U.d_dx(2) * 60 + U.d_dx() ** 2 * 30 + U**3 * 60,
            DiffPoly.const(-1),
        )
        assert member.equation == expected
        # same statement, written monically: u'''' + 10uu'' + 5u'² + 10u³ = x/6
        monic = XRelation(
            U.d_dx(4) + U * U.d_dx(2) * 10 + U.d_dx() ** 2 * 5 + U**3 * 10,
            DiffPoly.const(F(-1, 6)),
        )
        assert monic.normalize() == member.equation

    def test_quartic_merging_is_painleve_two(self):
        point = find_merging(MERGING)[0]
        member = emit_critical_ode(point)
        assert (member.family, member.m) == ("PII", 1)
        assert (member.r_c, member.constant) == (F(1, 2), -4)
        expected = XRelation(U.d_dx(2) * 2 - U**3 * 4, U * (-1))
        assert member.equation == expected
        assert member.S is not None

    def test_second_merging_member(self):
        point = find_merging(SEXTIC2)[0]
        member = emit_critical_ode(point)
        assert (member.family, member.m, member.constant) == ("PII", 2, -12)
        expected = XRelation(
            U.d_dx(4) * 24
            - U**2 * U.d_dx(2) * 60
            - U * U.d_dx() ** 2 * 60
            + U**5 * 9,
            U * 2,
        )
        assert member.equation == expected

    def test_canonical_form_is_idempotent(self):
        for crit in (find_critical(BMP)[0], find_merging(MERGING)[0]):
            eq = emit_critical_ode(crit).equation
            assert eq.normalize() == eq

    def test_json_round_trip_shape(self):
        member = emit_critical_ode(find_merging(MERGING)[0])
        doc = member.to_json()
        assert doc["family"] == "PII" and doc["m"] == 1
        assert doc["rc"] == "1/2" and doc["constant"] == "-4"
        assert doc["latex"] == member.latex()
        assert [t for t in doc["equation_terms"] if t["x"]] == [
            {"coeff": "-1", "factors": [["u", 0, 1]], "x": True}
        ]
        plain = [t for t in doc["equation_terms"] if not t["x"]]
        assert {t["coeff"] for t in plain} == {"2", "-4"}

    def test_latex_mentions_the_variable(self):
        member = emit_critical_ode(find_critical(SEXTIC)[0])
        assert "u_{xx}" in member.latex() and "x" in member.latex()

    def test_irrational_point_is_rejected(self):
        crit = find_critical(IRRATIONAL)[0]
        with pytest.raises(ValueError):
            emit_critical_ode(crit)

    def test_unknown_input_is_a_type_error(self):
        with pytest.raises(TypeError):
            emit_critical_ode("quartic:-2,1")


class TestCrosscheck:
    def test_one_cut_second_member(self):
        crit = find_critical(SEXTIC)[0]
        report = crosscheck_via_series(SEXTIC, crit)
        assert isinstance(report, CrosscheckReport)
        assert report.matches() and report.K == 2
        assert report.derived == report.member.equation

    def test_one_cut_third_member(self):
        crit = find_critical(BMP)[0]
        assert crosscheck_via_series(BMP, crit).matches()

    def test_merging_first_member(self):
        point = find_merging(MERGING)[0]
        report = crosscheck_via_series(MERGING, point)
        assert report.matches() and report.K == 3

    def test_merging_second_member(self):
        point = find_merging(SEXTIC2)[0]
        report = crosscheck_via_series(SEXTIC2, point)
        assert report.matches() and report.K == 5

    def test_deeper_truncation_changes_nothing(self):
        crit = find_critical(SEXTIC)[0]
        assert crosscheck_via_series(SEXTIC, crit, K=4).matches()

    def test_too_shallow_truncation_rejected(self):
        crit = find_critical(BMP)[0]
        with pytest.raises(ValueError):
            crosscheck_via_series(BMP, crit, K=2)
        point = find_merging(SEXTIC2)[0]
        with pytest.raises(ValueError):
            crosscheck_via_series(SEXTIC2, point, K=4)

    def test_wrong_constant_is_caught(self):
        good = find_critical(SEXTIC)[0]
        forged = OneCutCritical(r_c=good.r_c, T_c=good.T_c, m=good.m, c_m=F(-7))
        with pytest.raises(Mismatch) as exc:
            crosscheck_via_series(SEXTIC, forged)
        dp, dq = exc.value.difference
        assert not dp.is_zero() or not dq.is_zero()
