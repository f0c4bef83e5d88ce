"""Painlevé hierarchy members attached to critical points.

At a one-cut critical point of order m the double-scaled string equation
collapses to a member of the Painlevé I hierarchy,

    c_m · R_m(u) - x = 0,

where R_m is the m-th Gel'fand–Dikii differential polynomial, generated by

    ∂ₓ R_{k+1} = (ρ ∂ₓ³ + 4u ∂ₓ + 2uₓ) R_k,        R₀ = 1,

with the integration constant fixed to zero for every k ≥ 1 (ρ is the
critical radius, kept symbolic until a point is chosen).  At a two-cut
merging point of order m the parity-split pair collapses instead to a
Painlevé II hierarchy member,

    2 r_c φ_m · R_m(u) + x·u = 0,

with (R_k, S_k) generated by

    R_{k+1} = -ρ ∂ₓ² R_k + 2u S_k,      2ρ ∂ₓ S_{k+1} = u ∂ₓ R_{k+1}.

The seed pair is (R₀, S₀) = (-u/(2ρ), -u²/(8ρ²)): the compatibility
condition 2ρ ∂ₓS₀ = u ∂ₓR₀ forces S₀ once R₀ is chosen, and only this R₀
(not its derivative, which also floats around in informal statements of
the recursion) makes R₁ = uₓₓ/2 - u³/(4ρ²) come out with the weights that
match the merging-point ladder.  m = 1 gives the Painlevé II equation
itself once the constants are cleared.

``emit_critical_ode`` turns a classified critical point into the fully
numeric ODE in canonical form (integer coprime coefficients, positive
leading derivative term); ``crosscheck_via_series`` re-derives the same
relation from the double-scaled recurrence ladder — by direct readoff in
the one-cut case and by forward elimination of the even corrections in the
two-cut case — and demands exact agreement.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .diffpoly import DiffPoly, XRelation
from .errors import Mismatch
from .onecut import OneCutCritical, scaled_series
from .polys import RationalFunc
from .potential import Potential
from .scalars import as_fraction, is_exact, scalar_str
from .twocut import MergingPoint, symmetric_scaled_series

_U = DiffPoly.var("u")
_RHO = RationalFunc.var()


# -- the two recursions ----------------------------------------------------------

_GD_CACHE: list = [DiffPoly.const(1)]


def gelfand_dikii(m: int, rc=None) -> DiffPoly:
    """R_m of the Painlevé I / KdV hierarchy; ``rc=None`` keeps ρ symbolic.

    Each step integrates the third-order operator image exactly; the
    integration is an existence proof (it raises if the image is not a
    total derivative), and the derivative is checked against the operator
    once more after the fact.
    """
    if m < 0:
        raise ValueError("hierarchy index must be nonnegative")
    while len(_GD_CACHE) <= m:
        R = _GD_CACHE[-1]
        rhs = R.d_dx(3) * _RHO + _U * R.d_dx() * 4 + _U.d_dx() * R * 2
        nxt = rhs.integrate_x()
        assert nxt.d_dx() == rhs
        assert nxt.constant_term().is_zero()
        _GD_CACHE.append(nxt)
    R = _GD_CACHE[m]
    if rc is None:
        return R
    return R.eval_rho(as_fraction(rc))


_PII_CACHE: list = [
    (
        _U * (RationalFunc.const(Fraction(-1, 2)) / _RHO),
        _U * _U * (RationalFunc.const(Fraction(-1, 8)) / (_RHO * _RHO)),
    )
]


def pii_hierarchy(m: int, rc=None) -> tuple:
    """(R_m, S_m) of the Painlevé II hierarchy; ``rc=None`` keeps ρ symbolic.

    m = 0 returns the seed pair.  S_{k+1} is produced by exact integration
    of u·∂ₓR_{k+1}/(2ρ), which certifies that the second recursion relation
    is solvable at every order.
    """
    if m < 0:
        raise ValueError("hierarchy index must be nonnegative")
    while len(_PII_CACHE) <= m:
        R, S = _PII_CACHE[-1]
        Rn = R.d_dx(2) * (-_RHO) + _U * S * 2
        integrand = _U * Rn.d_dx() * (RationalFunc.const(Fraction(1, 2)) / _RHO)
        Sn = integrand.integrate_x()
        assert Sn.d_dx() * (_RHO * 2) == _U * Rn.d_dx()
        _PII_CACHE.append((Rn, Sn))
    R, S = _PII_CACHE[m]
    if rc is None:
        return R, S
    rc = as_fraction(rc)
    return R.eval_rho(rc), S.eval_rho(rc)


# -- emission ---------------------------------------------------------------------


@dataclass(frozen=True)
class HierarchyMember:
    """A Painlevé hierarchy ODE for the scaling function u(x).

    ``equation`` is canonical: denominators cleared, overall integer content
    removed, leading derivative term positive.  ``constant`` is c_m for the
    PI family and φ_m for PII; ``R`` (and ``S`` for PII) are the generating
    differential polynomials with ρ already evaluated at ``r_c``.
    """

    family: str  # "PI" | "PII"
    m: int
    r_c: Fraction
    constant: Fraction
    R: DiffPoly
    S: DiffPoly | None
    equation: XRelation

    def latex(self) -> str:
        return self.equation.render(latex=True)

    def to_json(self) -> dict:
        terms = [dict(t, x=False) for t in self.equation.p.to_json()]
        terms += [dict(t, x=True) for t in self.equation.q.to_json()]
        return {
            "family": self.family,
            "m": self.m,
            "rc": scalar_str(self.r_c),
            "constant": scalar_str(self.constant),
            "equation_terms": terms,
            "latex": self.latex(),
        }


def emit_critical_ode(crit) -> HierarchyMember:
    """The hierarchy member attached to a classified critical point.

    One-cut points map to PI members c_m R_m(u) = x, merging points to PII
    members 2 r_c φ_m R_m(u) + x u = 0.  The critical data must be exact
    rationals — an irrational critical radius has no exact ODE in this
    coefficient ring.
    """
    if isinstance(crit, OneCutCritical):
        if not (is_exact(crit.r_c) and is_exact(crit.c_m)):
            raise ValueError("critical point must carry exact rational data")
        rc = as_fraction(crit.r_c)
        cm = as_fraction(crit.c_m)
        R = gelfand_dikii(crit.m, rc)
        equation = XRelation(R * cm, DiffPoly.const(-1)).normalize()
        return HierarchyMember("PI", crit.m, rc, cm, R, None, equation)
    if isinstance(crit, MergingPoint):
        phim = crit.phi[crit.m - 1]
        if not (is_exact(crit.r_c) and is_exact(phim)):
            raise ValueError("merging point must carry exact rational data")
        rc = as_fraction(crit.r_c)
        phim = as_fraction(phim)
        R, S = pii_hierarchy(crit.m, rc)
        equation = XRelation(R * (2 * rc * phim), _U).normalize()
        return HierarchyMember("PII", crit.m, rc, phim, R, S, equation)
    raise TypeError(f"not a critical point: {crit!r}")


# -- cross-validation against the scaled ladders ----------------------------------


@dataclass(frozen=True)
class CrosscheckReport:
    member: HierarchyMember
    derived: XRelation
    K: int

    def matches(self) -> bool:
        return self.derived == self.member.equation


def _substitute_x_pair(P, Q, name, px, qx):
    """Substitute v = px + x·qx into P + x·Q.

    P must be linear in the jet of v and Q free of it; derivatives of v pick
    up cross terms from the explicit x, via dʲ(px + x·qx) = pxʲ + j·qxʲ⁻¹
    + x·qxʲ.
    """
    assert name not in Q.dependent_vars()
    newP = P.substitute({name: DiffPoly.zero()})
    newQ = Q
    for j in range(P.max_order(name) + 1):
        cj = P.partial(name, j)
        if not cj:
            continue
        assert name not in cj.dependent_vars(), f"ladder not linear in {name}"
        plain = px.d_dx(j)
        if j:
            plain = plain + qx.d_dx(j - 1) * j
        newP = newP + cj * plain
        newQ = newQ + cj * qx.d_dx(j)
    return newP, newQ


def _eliminate_two_cut(sc, m: int) -> XRelation:
    """Forward-eliminate the even corrections from the merging-point ladder.

    Orders 2..2m fix one correction each: the k-th relation must be linear
    in an undifferentiated 𝔞_k with constant coefficient (asserted, not
    assumed — this is the certificate that the elimination pattern holds),
    and only the order-2m relation carries x.  Substituting everything into
    the order-(2m+1) relation must leave 𝔞₁ alone; the result is the
    candidate PII member.
    """
    plain: dict = {}
    carrying = None  # (name, px, qx): the one x-carrying solved correction
    P = Q = DiffPoly.zero()
    for k in range(2, 2 * m + 2):
        rel = sc.ladder[k]
        P, Q = rel.p, rel.q
        if plain:
            P, Q = P.substitute(plain), Q.substitute(plain)
        if carrying is not None:
            P, Q = _substitute_x_pair(P, Q, *carrying)
        if k == 2 * m + 1:
            break
        if not P and not Q:
            continue  # odd sub-critical entries collapse once the evens are in
        assert k % 2 == 0, f"odd ladder entry {k} did not collapse"
        name = f"a{k}"
        assert P.max_order(name) == 0, f"{name} appears differentiated at its own order"
        c = P.partial(name, 0)
        assert not c.dependent_vars(), f"coefficient of {name} is not constant"
        cv = c.constant_term()
        assert c == DiffPoly.const(cv) and cv.is_constant()
        val = cv.constant_value()
        assert val != 0
        rest = P.substitute({name: DiffPoly.zero()})
        px = rest * (Fraction(-1) / val)
        qx = Q * (Fraction(-1) / val)
        if not Q:
            plain[name] = px
        else:
            assert carrying is None and k == 2 * m, "x entered the ladder early"
            carrying = (name, px, qx)
    deps = P.dependent_vars() | Q.dependent_vars()
    assert deps <= {"a1"}, f"elimination left {sorted(deps - {'a1'})} unresolved"
    return XRelation(
        P.substitute({"a1": _U}), Q.substitute({"a1": _U})
    ).normalize()


def crosscheck_via_series(g: Potential, crit, K: int | None = None) -> CrosscheckReport:
    """Re-derive the critical ODE from the double-scaled ladder and compare.

    The comparison is exact, canonical-form DiffPoly equality.  K defaults
    to the minimal truncation that contains the member (m for one-cut
    points, 2m+1 for merging points); a mismatch raises ``Mismatch``
    carrying the symbolic difference of the two relations.
    """
    member = emit_critical_ode(crit)
    if isinstance(crit, OneCutCritical):
        k = crit.m if K is None else K
        if k < crit.m:
            raise ValueError(f"need K >= {crit.m} to reach the critical order")
        sc = scaled_series(g, crit, k)
        rel = sc.painleve_relation()
        derived = XRelation(
            rel.p.substitute({"r1": _U}), rel.q.substitute({"r1": _U})
        ).normalize()
    else:
        kmin = 2 * crit.m + 1
        k = kmin if K is None else K
        if k < kmin:
            raise ValueError(f"need K >= {kmin} to close the elimination ladder")
        sc = symmetric_scaled_series(g, crit, k)
        derived = _eliminate_two_cut(sc, crit.m)
    if derived != member.equation:
        raise Mismatch(
            "scaled-series ladder disagrees with the emitted hierarchy member",
            difference=(
                derived.p - member.equation.p,
                derived.q - member.equation.q,
            ),
        )
    return CrosscheckReport(member=member, derived=derived, K=k)
