"""Regular one-cut large-N expansion and the double-scaled critical series.

Both engines expand the same finite-lattice quadratic identity

    r(T) · (U + U(T-ε)) · (U + U(T+ε)) = λ (U² - 1),

truncated as an ε-series of curve elements, and close each order with the
string equation ∮ V_λ(λ) U dλ/(2πi) = T.  What changes between the two is
the coefficient ring and the bookkeeping of orders:

* regular: U and r carry even powers of ε = 1/N; coefficients live in ℚ(ρ)
  with ρ standing for r₀(T), the curve w² = λ(λ - 4ρ) moves with T, and
  d/dT acts as f ↦ f'/W'(ρ).  Each even order is solved affinely — the
  unknown pair (U_k, r_k) enters linearly and the string integral
  eliminates r_k because ∮ V_λ · 2λ²/w³ = W'(ρ).

* double-scaled: T = T_c + ε̄^{2m} x with ε = ε̄^{2m+1}, so the lattice
  shift T → T ± ε becomes the unit shift x → x ± ε̄ and the curve freezes
  at r_c.  Corrections 𝔯_k(x) stay symbolic as differential-polynomial
  variables; the string ladder then yields the member of the Painlevé I
  hierarchy at order 2m and the higher flow equations beyond.

Odd orders of the defect must cancel by the ε → -ε symmetry of the
identity; the engines assert this rather than assume it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .diffpoly import DiffPoly, XRelation
from .errors import CriticalPointHit
from .phase import branch_density_positive, solve_one_cut
from .polys import Poly, RationalFunc
from .potential import Potential
from .roots import real_roots
from .scalars import (
    Scalar,
    as_fraction,
    default_digits,
    is_exact,
    mpf_of,
    scalar_str,
)
from .wring import EpsSeries, WElem, _padd, _pmul

_F0 = Fraction(0)
_F1 = Fraction(1)


def _odd_double_factorial(m: int) -> int:
    """(2m-1)!! with the empty product at m = 0."""
    out = 1
    for j in range(1, 2 * m, 2):
        out *= j
    return out


def ladder_weights(g: Potential, count: int) -> list[RationalFunc]:
    """c_j(ρ) = W^{(j)}(ρ) / (2^j (2j-1)!!) for j = 0..count.

    These are the weights with which the pole coefficients U_{k,j} enter the
    string equation: ∮ V_λ U₀/(λ-4ρ)^j dλ/(2πi) = c_j(ρ).
    """
    W = g.hodograph()
    out = []
    for j in range(count + 1):
        scale = Fraction(1, 2**j * _odd_double_factorial(j))
        out.append(RationalFunc(W.derivative(j) * scale))
    return out


# -- pole-basis extraction ---------------------------------------------------


def _shift_poly(coeffs: list, a) -> list:
    """p(λ) → p(μ + a) coefficient list, any coefficient ring."""
    out: list = []
    for c in reversed(coeffs):
        out = _padd(_pmul(out, [a, _F1]), [c])
    return out


def _ring_pow(x, n: int):
    out = None
    for _ in range(n):
        out = x if out is None else out * x
    return out if out is not None else _F1


def _pole_basis(elem: WElem, four_rc, inv_four_rc) -> tuple:
    """Write elem = U₀ · Σ_j u_j/(λ - 4r_c)^j; return (u₀, [u_1, .., u_M]).

    ``four_rc`` is 4r_c as a coefficient-ring element, ``inv_four_rc`` its
    ring inverse.  The peeling is certified: after removing every pole the
    remainder must be exactly u₀·(μ + 4r_c)^M, or the element was not of the
    claimed shape.
    """
    Y = elem.mul_w().div_lambda()  # Σ_j u_j/(λ-4r_c)^j on even slots
    M = Y.max_key() // 2
    w2 = [_F0, -four_rc, _F1]
    w2_pow: list[list] = [[_F1]]
    for _ in range(M):
        w2_pow.append(_pmul(w2_pow[-1], w2))
    P: list = []
    for m in range(M + 1):
        P = _padd(P, _pmul(Y.slot(2 * m), w2_pow[M - m]))
    P = _shift_poly(P, four_rc)

    binom = [_F1]  # (μ + 4r_c)^M
    for _ in range(M):
        binom = _pmul(binom, [four_rc, _F1])

    inv_M = _ring_pow(inv_four_rc, M)
    poles = []
    cur = P
    for _ in range(M, 0, -1):
        u = (cur[0] if cur else _F0) * inv_M
        poles.append(u)
        if u:
            cur = _padd(cur, [-(b * u) for b in binom])
        assert not cur or not cur[0], "pole peeling left a nonzero constant"
        cur = cur[1:]
    u0 = (cur[0] if cur else _F0) * inv_M
    if u0:
        leftover = _padd(cur, [-(b * u0) for b in binom])
        assert not leftover, "element has a part outside the U₀-pole basis"
    poles.reverse()  # we peeled from the deepest pole down to j = 1
    return u0, poles


# -- domain types --------------------------------------------------------------


@dataclass(frozen=True)
class OneCutExpansion:
    """r(T, ε) ≃ Σ_k r_k ε^{2k} with each r_k an exact rational function of r₀."""

    g: Potential
    T: Scalar
    r0: Scalar
    coeffs: tuple  # RationalFunc in ρ = r₀, indices 0..K (coeffs[0] is ρ itself)
    K: int

    def values(self, digits: int | None = None) -> list:
        """The coefficients evaluated at this expansion's r₀."""
        if is_exact(self.r0):
            x = as_fraction(self.r0)
            return [c(x) for c in self.coeffs]
        digits = digits or default_digits()
        with mpmath.workdps(digits):
            x = mpf_of(self.r0, digits)
            return [c(x) for c in self.coeffs]

    def to_json(self, digits: int | None = None) -> dict:
        return {
            "r0": scalar_str(self.r0),
            "coeffs": [c.render("r0") for c in self.coeffs],
            "eval": {
                "T": scalar_str(self.T),
                "values": [scalar_str(v) for v in self.values(digits)],
            },
        }


@dataclass(frozen=True)
class USeriesOrder:
    """U_k = U₀ Σ_j U_{k,j}/(λ-4ρ)^j; poles[j-1] is U_{k,j}."""

    k: int
    element: WElem
    poles: tuple

    def pole(self, j: int):
        if 1 <= j <= len(self.poles):
            return self.poles[j - 1]
        return RationalFunc.const(0)


@dataclass(frozen=True)
class OneCutCritical:
    """A singular one-cut hodograph point: W', .., W^{(m-1)} vanish at r_c."""

    r_c: Scalar
    T_c: Scalar
    m: int
    c_m: Scalar


@dataclass(frozen=True)
class ScaledOrder:
    k: int
    element: WElem
    poles: tuple  # U^{[k,j]} as DiffPoly, j = 1..k

    def pole(self, j: int) -> DiffPoly:
        if 1 <= j <= len(self.poles):
            return self.poles[j - 1]
        return DiffPoly.zero()


@dataclass(frozen=True)
class ScaledOneCut:
    """Double-scaled series at a critical point, with its constraint ladder.

    ladder[k] is the ε̄^{2k} string relation; entries below m are trivially
    zero (that is the scaling-exponent check), entry m is the Painlevé I
    hierarchy member for 𝔯₁, and entries beyond m chain in 𝔯₂, 𝔯₃, …
    """

    crit: OneCutCritical
    K: int
    orders: tuple
    ladder: tuple

    def painleve_relation(self) -> XRelation:
        return self.ladder[self.crit.m]


# -- the regular engine ---------------------------------------------------------


class _RegularEngine:
    def __init__(self, g: Potential):
        self.g = g
        self.W = g.hodograph()
        self.Wp = RationalFunc(self.W.derivative())
        self.rho = RationalFunc.var()
        self.d1 = RationalFunc(Poly((0, -4)))  # -4ρ
        self.d0 = RationalFunc.const(0)
        self.zero_elem = WElem.zero(self.d1, self.d0)
        self.u0 = WElem.from_poly(self.d1, self.d0, [RationalFunc.const(0), RationalFunc.const(1)], wpow=1)
        self.vp = list(g.v_lambda().coeffs)
        self._dw2 = [RationalFunc.const(0), RationalFunc.const(-4) / self.Wp]
        # 2U₀²/w = 2λ²/w³, the coefficient of r_k in the order-2k equation
        self.q_elem = (self.u0 * self.u0).scale(Fraction(2)).div_w()
        q_weight = self.q_elem.contour_pair(self.vp)
        assert q_weight == self.Wp, "string weight of the r_k term must be W'"

    def _dT(self, f):
        if isinstance(f, (Fraction, int)):  # slot padding is scalar
            return _F0
        return f.derivative() / self.Wp

    def _dT_elem(self, e: WElem) -> WElem:
        return e.d_dT(self._dT, self._dw2)

    def _embed(self, c) -> WElem:
        return WElem.from_poly(self.d1, self.d0, [c])

    def _even_series(self, entries: list, order: int) -> EpsSeries:
        cs = []
        for e in entries:
            cs.append(e)
            cs.append(self.zero_elem)
        return EpsSeries(cs, order, self.zero_elem)

    def _defect(self, u_entries: list, r_entries: list, order: int) -> EpsSeries:
        u = self._even_series(u_entries, order)
        r = self._even_series([self._embed(c) for c in r_entries], order)
        um = u.shift(Fraction(-1), self._dT_elem)
        up = u.shift(Fraction(1), self._dT_elem)
        lhs = r * ((u + um) * (u + up))
        one = EpsSeries.constant(self._embed(RationalFunc.const(1)), order, self.zero_elem)
        rhs = (u * u - one).map(lambda e: e.mul_poly([_F0, _F1]))
        return lhs - rhs

    def run(self, K: int) -> tuple[list, list]:
        """Solve orders 2..2K; returns ([r₀..r_K] in ℚ(ρ), [U₀..U_K])."""
        r_list: list = [self.rho]
        u_list: list = [self.u0]
        for k in range(1, K + 1):
            F = self._defect(u_list + [self.zero_elem], r_list + [RationalFunc.const(0)], 2 * k)
            for odd in range(1, 2 * k, 2):
                assert F.coefficient(odd).is_zero(), "odd defect order survived"
            base = F.coefficient(2 * k).div_w().scale(Fraction(1, 2))
            r_k = -(base.contour_pair(self.vp)) / self.Wp
            u_list.append(base + self.q_elem.scale(r_k))
            r_list.append(r_k)
        # residual certificate: the full truncation satisfies the identity
        F = self._defect(u_list, r_list, 2 * K)
        for j in range(2 * K + 1):
            assert F.coefficient(j).is_zero(), f"defect at ε^{j} is nonzero"
        # and the string equation at every computed order
        assert u_list[0].contour_pair(self.vp) == RationalFunc(self.W)
        for k in range(1, K + 1):
            assert not u_list[k].contour_pair(self.vp)
        return r_list, u_list


def expand_regular(
    g: Potential, T, K: int, digits: int | None = None
) -> OneCutExpansion:
    """Large-N coefficients r₀..r_K on the one-cut branch through (g, T)."""
    if K < 0:
        raise ValueError("truncation order must be nonnegative")
    digits = digits or default_digits()
    r0 = solve_one_cut(g, T, digits)
    wp = g.hodograph().derivative()
    if is_exact(r0):
        singular = wp(as_fraction(r0)) == 0
    else:
        with mpmath.workdps(digits):
            singular = abs(wp(r0)) < mpmath.mpf(10) ** (-(digits // 2))
    if singular:
        raise CriticalPointHit(
            f"W'(r0) = 0 at T = {scalar_str(T)}; use the double-scaling path"
        )
    r_list, _ = _RegularEngine(g).run(K)
    return OneCutExpansion(g=g, T=T, r0=r0, coeffs=tuple(r_list), K=K)


def u_series_coefficients(g: Potential, r0=None, K: int = 1) -> list[USeriesOrder]:
    """U₀..U_K with their pole tables U_{k,j}.

    With r0 = None the tables stay rational functions of ρ; an exact r0
    evaluates them at that point.
    """
    engine = _RegularEngine(g)
    _, u_list = engine.run(K)
    four = RationalFunc(Poly((0, 4)))
    inv_four = RationalFunc.const(1) / four
    out = [USeriesOrder(k=0, element=u_list[0], poles=())]
    for k in range(1, K + 1):
        u0_part, poles = _pole_basis(u_list[k], four, inv_four)
        assert not u0_part, "U_k acquired a pole-free part"
        if r0 is not None:
            x = as_fraction(r0) if is_exact(r0) else mpf_of(r0)
            poles = [p(x) for p in poles]
        out.append(USeriesOrder(k=k, element=u_list[k], poles=tuple(poles)))
    return out


# -- critical points -------------------------------------------------------------


def _near_branch_regular(g: Potential, r_c, T_s, radius, digits: int) -> bool:
    """Does W(r) = T_s have a density-positive root within ``radius`` of r_c?"""
    W = g.hodograph()
    if is_exact(T_s):
        roots = [r.value for r in real_roots(W - as_fraction(T_s), digits)]
    else:
        with mpmath.workdps(digits + 10):
            cs = [mpf_of(c, digits + 10) for c in W.coeffs]
            cs[0] -= mpf_of(T_s, digits + 10)
            roots = [
                r.real
                for r in mpmath.polyroots(list(reversed(cs)), maxsteps=200, extraprec=60)
                if abs(r.imag) < mpmath.mpf(10) ** (-(digits // 2))
            ]
    for r in roots:
        with mpmath.workdps(digits + 10):
            near = abs(mpf_of(r, digits + 10) - mpf_of(r_c, digits + 10)) <= mpf_of(
                radius, digits + 10
            )
            positive = mpf_of(r, digits + 10) > 0
        if near and positive and branch_density_positive(g, r, digits):
            return True
    return False


def find_critical(g: Potential, digits: int | None = None) -> tuple[OneCutCritical, ...]:
    """All admissible singular one-cut points of the hodograph, by order m.

    Admissible means r_c > 0, T_c = W(r_c) > 0, and the point borders a
    branch-regular region: at T_c ± 10⁻³ some nearby hodograph root carries
    a strictly positive density.  (The equilibrium-measure inequalities away
    from the support may already fail there — a critical point reached along
    a metastable branch is still a critical point.)
    """
    digits = digits or default_digits()
    W = g.hodograph()
    Wp = W.derivative()
    delta = Fraction(1, 1000)
    roots = real_roots(Wp, digits)
    approx = [mpf_of(r.value, digits) for r in roots]
    found = []
    for i, root in enumerate(roots):
        r_c = root.value
        if not approx[i] > 0:
            continue
        m = root.multiplicity + 1
        with mpmath.workdps(digits + 10):
            T_c = W(r_c if root.exact else approx[i])
            if not T_c > 0:
                continue
            c_m = W.derivative(m)(r_c) * Fraction(
                1, 2**m * _odd_double_factorial(m)
            )
            # the sampling window must stay local to this branch point: never
            # wider than half the gap to the next extremum of the hodograph
            radius = max(mpmath.mpf(1), abs(approx[i])) / 4
            for j, other in enumerate(approx):
                if j != i:
                    radius = min(radius, abs(approx[i] - other) / 2)
        boundary = any(
            _near_branch_regular(g, r_c, T_c + s * delta, radius, digits)
            for s in (-1, 1)
        )
        if boundary:
            found.append(OneCutCritical(r_c=r_c, T_c=T_c, m=m, c_m=c_m))
    found.sort(key=lambda c: mpf_of(c.r_c, digits))
    return tuple(found)


# -- the double-scaled engine ------------------------------------------------------


class _ScaledEngine:
    """ε̄-expansion at a one-cut critical point; coefficients are DiffPolys."""

    def __init__(self, g: Potential, crit: OneCutCritical):
        if not is_exact(crit.r_c):
            raise ValueError("double-scaled series needs an exact critical point")
        self.g = g
        self.rc = as_fraction(crit.r_c)
        self.Tc = as_fraction(crit.T_c)
        self.m = crit.m
        self.d1 = DiffPoly.const(-4 * self.rc)
        self.d0 = DiffPoly.zero()
        self.zero_elem = WElem.zero(self.d1, self.d0)
        self.u0 = WElem.from_poly(
            self.d1, self.d0, [DiffPoly.zero(), DiffPoly.const(1)], wpow=1
        )
        self.vp = list(g.v_lambda().coeffs)

    def _embed(self, c: DiffPoly) -> WElem:
        return WElem.from_poly(self.d1, self.d0, [c])

    @staticmethod
    def _dx_elem(e: WElem) -> WElem:
        return e.d_dT(
            lambda c: _F0 if isinstance(c, (Fraction, int)) else c.d_dx(), None
        )

    def _even_series(self, entries: list, order: int) -> EpsSeries:
        cs = []
        for e in entries:
            cs.append(e)
            cs.append(self.zero_elem)
        return EpsSeries(cs, order, self.zero_elem)

    def _defect(self, u_entries: list, r_entries: list, order: int) -> EpsSeries:
        u = self._even_series(u_entries, order)
        r = self._even_series([self._embed(c) for c in r_entries], order)
        um = u.shift(Fraction(-1), self._dx_elem)
        up = u.shift(Fraction(1), self._dx_elem)
        lhs = r * ((u + um) * (u + up))
        one = EpsSeries.constant(self._embed(DiffPoly.const(1)), order, self.zero_elem)
        rhs = (u * u - one).map(lambda e: e.mul_poly([_F0, _F1]))
        return lhs - rhs

    def run(self, K: int) -> tuple[list, list]:
        """U^{[0]}..U^{[K]} and the string ladder relations."""
        r_entries = [DiffPoly.const(self.rc)] + [
            DiffPoly.var(f"r{k}") for k in range(1, K + 1)
        ]
        u_list = [self.u0]
        for k in range(1, K + 1):
            F = self._defect(u_list + [self.zero_elem], r_entries[: k + 1], 2 * k)
            for odd in range(1, 2 * k, 2):
                assert F.coefficient(odd).is_zero(), "odd defect order survived"
            u_list.append(F.coefficient(2 * k).div_w().scale(Fraction(1, 2)))
        F = self._defect(u_list, r_entries, 2 * K)
        for j in range(2 * K + 1):
            assert F.coefficient(j).is_zero(), f"scaled defect at ε̄^{j} is nonzero"

        ladder = []
        for k in range(K + 1):
            p = DiffPoly.zero() + u_list[k].contour_pair(self.vp)
            if k == 0:
                assert p == DiffPoly.const(self.Tc), "order-0 string must give T_c"
                ladder.append(XRelation(p - DiffPoly.const(self.Tc), DiffPoly.zero()))
            elif k < self.m:
                assert p.is_zero(), (
                    "constraint below the critical order did not vanish; "
                    "the scaling exponent would be wrong"
                )
                ladder.append(XRelation(p, DiffPoly.zero()))
            elif k == self.m:
                ladder.append(XRelation(p, DiffPoly.const(-1)))
            else:
                ladder.append(XRelation(p, DiffPoly.zero()))
        return u_list, ladder


def scaled_series(g: Potential, crit: OneCutCritical, K: int) -> ScaledOneCut:
    """Double-scaled one-cut series to order ε̄^{2K} with its constraint ladder."""
    if K < crit.m:
        raise ValueError("need K ≥ m to reach the Painlevé relation")
    engine = _ScaledEngine(g, crit)
    u_list, ladder = engine.run(K)
    four = 4 * engine.rc
    inv_four = Fraction(1) / four
    orders = [ScaledOrder(k=0, element=u_list[0], poles=())]
    for k in range(1, K + 1):
        u0_part, poles = _pole_basis(u_list[k], four, inv_four)
        assert not u0_part, "U^[k] acquired a pole-free part"
        assert len(poles) <= k, "double-scaled pole depth exceeded its order"
        orders.append(ScaledOrder(k=k, element=u_list[k], poles=tuple(poles)))
    return ScaledOneCut(crit=crit, K=K, orders=tuple(orders), ladder=tuple(ladder))
