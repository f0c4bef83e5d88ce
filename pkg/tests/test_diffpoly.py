"""Tests for the differential-polynomial algebra.

Integration oracles (checked by differentiating back, plus frozen forms):
  ∫ 2 u u_x = u²,   ∫ u_x u_xx = u_x²/2,
  ∫ (v'' w - v w'') = v' w - v w',
  and u, u², 1 + u u_x are not total derivatives.
"""

from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from largen.diffpoly import RHO, DiffPoly, XRelation
from largen.errors import NotTotalDerivative
from largen.polys import Poly, RationalFunc

u = DiffPoly.var("u")
ux = DiffPoly.var("u", 1)
uxx = DiffPoly.var("u", 2)
v = DiffPoly.var("v")
w = DiffPoly.var("w")


def test_basic_arithmetic_and_equality():
    assert u + u == 2 * u
    assert (u + v) * (u - v) == u * u - v * v
    assert (u - u).is_zero()
    assert u * 0 == DiffPoly.zero()
    assert DiffPoly.const(F(1, 2)) + DiffPoly.const(F(1, 2)) == DiffPoly.const(1)


def test_monomials_merge_exponents():
    m = u * u * ux
    assert m.total_degree() == 3
    assert m.max_order() == 1
    assert m.max_order("u") == 1
    assert m.coefficient((("u", 0, 2), ("u", 1, 1))) == RationalFunc.const(1)


def test_d_dx_product_rule():
    assert (u * u).d_dx() == 2 * u * ux
    assert (u * uxx).d_dx() == ux * uxx + u * DiffPoly.var("u", 3)
    assert DiffPoly.const(5).d_dx().is_zero()
    assert (u**3).d_dx() == 3 * u * u * ux


def test_partial_and_euler():
    f = u * u * uxx
    assert f.partial("u", 2) == u * u
    assert f.partial("u", 0) == 2 * u * uxx
    assert f.partial("v", 0).is_zero()
    # Euler operator annihilates total derivatives
    g = (u * u * ux + ux * uxx).d_dx()
    assert g.euler("u").is_zero()
    assert (u * u).euler("u") == 2 * u


def test_integrate_x_simple():
    assert (2 * u * ux).integrate_x() == u * u
    assert (ux * uxx).integrate_x() == DiffPoly.const(F(1, 2)) * ux * ux
    assert DiffPoly.zero().integrate_x().is_zero()


def test_integrate_x_cross_variable_cancellation():
    # v'' w - v w'' = d/dx (v' w - v w'): the antiderivative's monomials
    # are reachable only through the predecessor closure
    vxx = DiffPoly.var("v", 2)
    wxx = DiffPoly.var("w", 2)
    f = vxx * w - v * wxx
    g = f.integrate_x()
    assert g.d_dx() == f
    assert g == DiffPoly.var("v", 1) * w - v * DiffPoly.var("w", 1)


def test_integrate_x_rejects_non_derivatives():
    for bad in (u, u * u, DiffPoly.const(1) + u * ux):
        with pytest.raises(NotTotalDerivative):
            bad.integrate_x()


def test_is_total_x_derivative():
    assert (2 * u * ux).is_total_x_derivative()
    assert not (u * u).is_total_x_derivative()


@given(st.integers(min_value=0, max_value=2), st.integers(min_value=1, max_value=3))
@settings(max_examples=20, deadline=None)
def test_integrate_inverts_d_dx(order, deg):
    f = (DiffPoly.var("u", order) ** deg) * v
    assert f.d_dx().integrate_x().d_dx() == f.d_dx()


def test_substitute_with_chain_rule():
    assert (u * u).substitute({"u": DiffPoly.var("v", 1)}) == DiffPoly.var("v", 1) ** 2
    # u_x under u -> v² becomes 2 v v_x
    got = ux.substitute({"u": v * v})
    assert got == 2 * v * DiffPoly.var("v", 1)
    # untouched variables pass through
    assert (u * w).substitute({"u": v}) == v * w


def test_rho_coefficients_and_eval():
    f = DiffPoly.const(RHO) * uxx + DiffPoly.const(2) * u
    g = f.eval_rho(F(1, 2))
    assert g == DiffPoly.const(F(1, 2)) * uxx + 2 * u
    # division by rho stays exact
    h = DiffPoly.const(RationalFunc(Poly.one(), Poly([0, 2]))) * u  # u/(2 rho)
    assert h.eval_rho(F(1, 4)) == 2 * u


def test_render_text_and_latex():
    f = 2 * DiffPoly.var("u", 4) + 3 * u * uxx + u**3
    s = f.render()
    assert s == "2*u_xxxx + 3*u*u_xx + u^3"
    assert f.render(latex=True) == "2 u_{xxxx} + 3 u u_{xx} + u^{3}"
    g = DiffPoly.const(RHO) * uxx - u
    assert g.render() == "rho*u_xx - u"
    assert DiffPoly.var("u", 5).render() == "u^(5)"


def test_to_json_structure():
    f = DiffPoly.const(RHO) * uxx
    assert f.to_json() == [{"coeff": "rho", "factors": [["u", 2, 1]]}]


def test_xrelation_normalize_and_render():
    rel = XRelation(
        DiffPoly.const(F(3, 2)) * ux,
        DiffPoly.const(F(-1, 2)),
    )
    norm = rel.normalize()
    assert norm.p == 3 * ux
    assert norm.q == DiffPoly.const(-1)
    assert norm.render() == "3*u_x - x = 0"
    # x-coefficient that is itself a polynomial
    rel2 = XRelation(2 * uxx, -u).normalize()
    assert rel2.render() == "2*u_xx - x*(u) = 0"


def test_xrelation_normalize_requires_numeric():
    rel = XRelation(DiffPoly.const(RHO) * u, DiffPoly.zero())
    with pytest.raises(ValueError):
        rel.normalize()
