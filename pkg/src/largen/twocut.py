"""Two-cut expansions: the interleaved endpoint pair and the merged-cut limit.

On a two-cut solution the recurrence coefficients do not converge — they
oscillate between two branches with the parity of the index, so the objects
to expand are the interleaved limits a(T, ε) and b(T, ε) (odd and even
subsequence) together with the pair of curve functions V, W satisfying

    a · (V + W(T-ε)) · (V + W(T+ε)) = λ (V² - 1),
    b · (W + V(T-ε)) · (W + V(T+ε)) = λ (W² - 1),

on the genus-one curve w² = λ² - 2(a₀+b₀)λ + (b₀-a₀)².  Everything is
symmetric under a ↔ b (swapping the roles of the two subsequences), and the
engines assert that rather than assume it.

The module has three layers:

* ``expand_two_cut_regular`` — even-ε corrections (a_k, b_k) as exact
  rational functions of the endpoints, closed per order by the pair of
  string equations; the solve matrix is the Jacobian of the planar
  hodograph system, so regularity of the phase point is exactly its
  nonvanishing.

* ``build_F`` / ``find_merging`` — the planar free-energy functional in the
  squared-endpoint chart (σ, τ), whose σ-derivatives at σ = 0 grade how the
  two cuts merge; ``find_merging`` locates and classifies those points.

* ``symmetric_scaled_series`` — at a merging point of order m the scaling
  T = T_c + ε̄^{2m} x (with N^{-1} = ε̄^{2m+1}) collapses both equations into
  one for 𝕍 with the combination rule 𝕍(-ε̄) in the shifted slots; the
  corrections 𝔞_k(x) stay symbolic and the string ladder produces the
  constraints that ultimately close into a Painlevé II hierarchy member.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .diffpoly import DiffPoly, XRelation
from .errors import NoTwoCutSolution, SingularHodograph, TruncationExceeded
from .mpolys import MPoly, MRatFunc
from .phase import solve_two_cut
from .potential import Potential
from .roots import real_roots
from .scalars import (
    Scalar,
    as_fraction,
    default_digits,
    is_exact,
    mpf_of,
    rationalize,
    scalar_str,
)
from .structured import (
    gamma_moment,
    merging_free_energy,
    phi_moment,
    psi_poly,
    twocut_hodographs,
)
from .wring import EpsSeries, WElem, _padd, _pmul

_F0 = Fraction(0)
_F1 = Fraction(1)


# -- coefficient helpers ------------------------------------------------------


def _exact_div(p: MPoly, d: MPoly):
    """p/d as an MPoly, or None when the division is not exact.

    Greedy leading-term division in lex order; for a monomial order this
    succeeds if and only if d divides p, which is all the callers need.
    """
    if p.is_zero():
        return p
    lead = max(d.terms)
    lc = d.terms[lead]
    rem = dict(p.terms)
    out = {}
    while rem:
        e = max(rem)
        q = tuple(a - b for a, b in zip(e, lead))
        if any(x < 0 for x in q):
            return None
        c = rem.pop(e) / lc
        out[q] = c
        for de, dc in d.terms.items():
            if de == lead:
                continue
            ke = tuple(a + b for a, b in zip(q, de))
            nc = rem.get(ke, _F0) - c * dc
            if nc:
                rem[ke] = nc
            else:
                rem.pop(ke, None)
    return MPoly(p.nvars, out)


def _swap_poly(p: MPoly) -> MPoly:
    """Exchange the two endpoint variables of an exponent table."""
    return MPoly(2, {(e[1], e[0]): c for e, c in p.terms.items()})


def _is_zero_coeff(c) -> bool:
    if isinstance(c, (Fraction, int)):
        return not c
    return c.is_zero()


class _LocCtx:
    """Factor data shared by the _Loc coefficients of one endpoint solve."""

    __slots__ = ("det", "bma")

    def __init__(self, det: MPoly, bma: MPoly):
        self.det = det
        self.bma = bma


class _Loc:
    """num · det^{-i} · (b₀-a₀)^{-j}: ℚ[a₀, b₀] localized at the two factors
    every denominator of the two-cut solve is built from.

    Unreduced MRatFunc quotients square in size under the d/dT chains the
    lattice shifts generate; tracking the two known denominator factors as
    integer exponents instead keeps all polynomial arithmetic on numerators.
    Construction re-canonicalizes, so exponents can go negative (factors in
    the numerator) and values have one representation — cheap equality.
    """

    __slots__ = ("ctx", "num", "i", "j")

    def __init__(self, ctx: _LocCtx, num: MPoly, i: int = 0, j: int = 0, canonical: bool = False):
        if not num.terms:
            i = j = 0
        elif not canonical:
            while True:
                q = _exact_div(num, ctx.det)
                if q is None:
                    break
                num, i = q, i - 1
            while True:
                q = _exact_div(num, ctx.bma)
                if q is None:
                    break
                num, j = q, j - 1
        self.ctx, self.num, self.i, self.j = ctx, num, i, j

    def _lift(self, di: int, dj: int) -> MPoly:
        out = self.num
        for _ in range(di):
            out = out * self.ctx.det
        for _ in range(dj):
            out = out * self.ctx.bma
        return out

    def _coerce(self, other):
        if isinstance(other, _Loc):
            return other
        if isinstance(other, (Fraction, int)):
            return _Loc(self.ctx, MPoly.const(self.num.nvars, other), 0, 0, canonical=True)
        return None

    def is_zero(self) -> bool:
        return not self.num.terms

    def __bool__(self) -> bool:
        return bool(self.num.terms)

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        I, J = max(self.i, o.i), max(self.j, o.j)
        return self._lift(I - self.i, J - self.j) == o._lift(I - o.i, J - o.j)

    def __add__(self, other) -> "_Loc":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        I, J = max(self.i, o.i), max(self.j, o.j)
        return _Loc(
            self.ctx,
            self._lift(I - self.i, J - self.j) + o._lift(I - o.i, J - o.j),
            I,
            J,
        )

    __radd__ = __add__

    def __neg__(self) -> "_Loc":
        return _Loc(self.ctx, -self.num, self.i, self.j, canonical=True)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        if isinstance(other, (Fraction, int)):
            return _Loc(self.ctx, self.num * other, self.i, self.j, canonical=True)
        if not isinstance(other, _Loc):
            return NotImplemented
        return _Loc(self.ctx, self.num * other.num, self.i + other.i, self.j + other.j)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "_Loc":
        if n < 0:
            raise ValueError("negative powers only via division")
        out = _Loc(self.ctx, MPoly.const(self.num.nvars, 1), 0, 0, canonical=True)
        for _ in range(n):
            out = out * self
        return out

    def __truediv__(self, other) -> "_Loc":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.num.total_degree() != 0:
            raise TypeError("division only by factor monomials in the localized ring")
        c = next(iter(o.num.terms.values()))
        return _Loc(
            self.ctx, self.num * (_F1 / c), self.i - o.i, self.j - o.j, canonical=True
        )

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def diff(self, k: int) -> "_Loc":
        det, bma = self.ctx.det, self.ctx.bma
        num = self.num.diff(k) * det * bma
        if self.i:
            num = num - self.num * (det.diff(k) * bma) * self.i
        if self.j:
            num = num - self.num * (bma.diff(k) * det) * self.j
        return _Loc(self.ctx, num, self.i + 1, self.j + 1)

    def swapped(self) -> "_Loc":
        """The image under a₀ ↔ b₀ (det is symmetric, b₀-a₀ flips sign)."""
        num = _swap_poly(self.num)
        if self.j % 2:
            num = num * Fraction(-1)
        return _Loc(self.ctx, num, self.i, self.j, canonical=True)

    def to_ratfunc(self) -> MRatFunc:
        num, den = self.num, MPoly.const(self.num.nvars, 1)
        for f, e in ((self.ctx.det, self.i), (self.ctx.bma, self.j)):
            for _ in range(abs(e)):
                if e > 0:
                    den = den * f
                else:
                    num = num * f
        return MRatFunc(num, den)

    def __repr__(self):
        return f"_Loc({self.num.render()!s}, det^-{self.i}, bma^-{self.j})"


# -- domain types -------------------------------------------------------------


@dataclass(frozen=True)
class TwoCutExpansion:
    """a(T, ε) ≃ Σ a_k ε^{2k}, b(T, ε) ≃ Σ b_k ε^{2k} on a two-cut branch.

    ``coeffs[k]`` is the pair (a_k, b_k) as rational functions of the
    endpoints; coeffs[0] is the endpoint pair itself.  ``slopes`` holds
    (da₀/dT, db₀/dT) in the same ring — the T-derivatives that the lattice
    shift injects into every higher order.
    """

    g: Potential
    T: Scalar
    a0: Scalar
    b0: Scalar
    coeffs: tuple  # ((a_k, b_k) as MRatFunc in (a0, b0)), k = 0..K
    slopes: tuple  # (da0/dT, db0/dT)
    K: int

    def pair(self, k: int) -> tuple:
        if k > self.K:
            raise TruncationExceeded(f"expansion truncated at ε^{2 * self.K}")
        return self.coeffs[k]

    def _point(self, digits):
        if is_exact(self.a0) and is_exact(self.b0):
            return (as_fraction(self.a0), as_fraction(self.b0))
        return (mpf_of(self.a0, digits), mpf_of(self.b0, digits))

    def values(self, digits: int | None = None) -> list:
        """[(a_k, b_k)] evaluated at this expansion's endpoint pair."""
        digits = digits or default_digits()
        with mpmath.workdps(digits):
            pt = self._point(digits)
            return [(ak.eval(pt), bk.eval(pt)) for ak, bk in self.coeffs]

    def slope_values(self, digits: int | None = None) -> tuple:
        digits = digits or default_digits()
        with mpmath.workdps(digits):
            pt = self._point(digits)
            return (self.slopes[0].eval(pt), self.slopes[1].eval(pt))

    def to_json(self, digits: int | None = None) -> dict:
        names = ("a0", "b0")
        vals = self.values(digits)
        da, db = self.slope_values(digits)
        return {
            "a0": scalar_str(self.a0),
            "b0": scalar_str(self.b0),
            "coeffs": [
                {"a": ak.render(names), "b": bk.render(names)}
                for ak, bk in self.coeffs
            ],
            "eval": {
                "T": scalar_str(self.T),
                "a": [scalar_str(v[0]) for v in vals],
                "b": [scalar_str(v[1]) for v in vals],
                "da0_dT": scalar_str(da),
                "db0_dT": scalar_str(db),
            },
        }


@dataclass(frozen=True)
class MergingPoint:
    """A point where the two cuts touch: r_c parametrizes the merged support.

    m grades the contact: the first m-1 σ-moments φ_k vanish and φ_m does
    not, so the density behaves as x^{2m} at the pinch.  γ₁ ≠ 0 is the
    transversality of the surviving endpoint.
    """

    r_c: Scalar
    T_c: Scalar
    m: int
    phi: tuple  # (φ_1, .., φ_m); all but the last are zero
    gamma1: Scalar

    def to_json(self) -> dict:
        return {
            "rc": scalar_str(self.r_c),
            "Tc": scalar_str(self.T_c),
            "m": self.m,
            "phi": [scalar_str(p) for p in self.phi],
            "gamma1": scalar_str(self.gamma1),
        }


@dataclass(frozen=True)
class FreeEnergy:
    """Planar endpoint functional F(σ, τ) = ∮ V_λ w + (T/2)(σ + τ).

    ``residue_part`` is the contour term alone; ``poly`` includes the
    temperature term.  Stationarity in (σ, τ) reproduces the two string
    equations, and the contour term satisfies the Euler–Poisson–Darboux
    equation 2(τ-σ) F_στ = F_σ - F_τ identically — ``epd_defect`` returns
    the (identically zero) difference so callers can certify it.
    """

    g: Potential
    T: Fraction
    poly: MPoly
    residue_part: MPoly

    def gradient(self) -> tuple:
        return (self.poly.diff(0), self.poly.diff(1))

    def sigma_derivative(self, k: int) -> MPoly:
        """∂^k F / ∂σ^k as a polynomial in (σ, τ)."""
        out = self.poly
        for _ in range(k):
            out = out.diff(0)
        return out

    def epd_defect(self) -> MPoly:
        s = MPoly.var(2, 0)
        t = MPoly.var(2, 1)
        f = self.poly
        return (t - s) * f.diff(0).diff(1) * 2 - (f.diff(0) - f.diff(1))


@dataclass(frozen=True)
class SymmetricScaledOrder:
    """𝕍^{[k]} with its two-pole table:

        𝕍^{[k]} = (1/w_c) [ C^{[k]} + Σ_j A_j^{[k]} (λ-4r_c)/λ^j
                                     + B_j^{[k]} λ/(λ-4r_c)^j ].
    """

    k: int
    element: WElem
    C: DiffPoly
    A: tuple  # A_j^{[k]}, j = 1..
    B: tuple

    def a_pole(self, j: int) -> DiffPoly:
        if 1 <= j <= len(self.A):
            return self.A[j - 1]
        return DiffPoly.zero()

    def b_pole(self, j: int) -> DiffPoly:
        if 1 <= j <= len(self.B):
            return self.B[j - 1]
        return DiffPoly.zero()


@dataclass(frozen=True)
class SymmetricTwoCut:
    """Double-scaled series at a merging point, with its string ladder.

    ladder[k] is the ε̄^k relation ∮ V_λ 𝕍^{[k]} = δ_{k,0} T_c + δ_{k,2m} x
    as a constraint on the symbolic corrections 𝔞₁, 𝔞₂, …; unlike the
    one-cut case the sub-critical entries are not identically zero — they
    are the equations that eliminate the even corrections.
    """

    point: MergingPoint
    K: int
    orders: tuple
    ladder: tuple

    def order(self, k: int) -> SymmetricScaledOrder:
        if k > self.K:
            raise TruncationExceeded(f"series truncated at ε̄^{self.K}")
        return self.orders[k]

    def relation(self, k: int) -> XRelation:
        if k > self.K:
            raise TruncationExceeded(f"ladder truncated at ε̄^{self.K}")
        return self.ladder[k]


# -- the regular engine --------------------------------------------------------


class _TwoCutRegularEngine:
    """Order-by-order solve of the coupled pair over ℚ(a₀, b₀).

    Each even order is linear in (V_k, W_k, a_k, b_k): inverting the 2×2
    λ-matrix of the quadratic pair costs one exact division by λ·w, and the
    two string integrals then fix (a_k, b_k) through the same 2×2 matrix
    that is the Jacobian of the planar hodograph system — computed here
    from the curve and certified against the hodographs' actual partials.

    Coefficients live in the localized ring _Loc, so the only polynomial
    products are numerator × numerator; fine through k ≈ 3, growing fast
    beyond that.
    """

    def __init__(self, g: Potential):
        self.g = g
        W_a, W_b = twocut_hodographs(g.gs)
        det_mp = W_a.diff(0) * W_a.diff(0) - W_a.diff(1) * W_b.diff(0)
        if det_mp.is_zero():
            raise SingularHodograph("endpoint Jacobian vanishes identically")
        assert _swap_poly(det_mp) == det_mp, "Jacobian determinant not symmetric"
        a_mp = MPoly.var(2, 0)
        b_mp = MPoly.var(2, 1)
        self.det_mp = det_mp
        self.ctx = ctx = _LocCtx(det_mp, b_mp - a_mp)
        poly = lambda p: _Loc(ctx, p)
        a0 = self.a0 = poly(a_mp)
        b0 = self.b0 = poly(b_mp)
        self.d1 = (a0 + b0) * Fraction(-2)
        self.d0 = (b0 - a0) * (b0 - a0)
        self.zero_elem = WElem.zero(self.d1, self.d0)
        self.v0 = WElem.from_poly(self.d1, self.d0, [a0 - b0, _F1], wpow=1)
        self.w0 = WElem.from_poly(self.d1, self.d0, [b0 - a0, _F1], wpow=1)
        self.vp = list(g.v_lambda().coeffs)

        # response kernels: the coefficients of (a_k, b_k) in (V_k, W_k)
        self.JA = WElem.from_poly(
            self.d1, self.d0, [_F0, (a0 + b0) * Fraction(-2), Fraction(2)], wpow=3
        )
        self.JBa = WElem.from_poly(self.d1, self.d0, [_F0, a0 * Fraction(4)], wpow=3)
        self.JBb = WElem.from_poly(self.d1, self.d0, [_F0, b0 * Fraction(4)], wpow=3)

        assert self.v0.contour_pair(self.vp) == poly(W_a)
        assert self.w0.contour_pair(self.vp) == poly(W_b)
        self.s1 = self.JA.contour_pair(self.vp)
        self.s2 = self.JBa.contour_pair(self.vp)
        self.t1 = self.JBb.contour_pair(self.vp)
        # the string responses must be the hodograph Jacobian, entry by entry
        assert self.s1 == poly(W_a.diff(0)) and self.s1 == poly(W_b.diff(1))
        assert self.s2 == poly(W_a.diff(1))
        assert self.t1 == poly(W_b.diff(0))
        self.det = self.s1 * self.s1 - self.s2 * self.t1
        assert self.det == poly(det_mp)
        # T-motion of the endpoints: d/dT of (W_a = T, W_b = T)
        self.da0 = (self.s1 - self.s2) / self.det
        self.db0 = (self.s1 - self.t1) / self.det
        self.dw2 = [
            (b0 - a0) * (self.db0 - self.da0) * Fraction(2),
            (self.da0 + self.db0) * Fraction(-2),
        ]

    def _dT(self, c):
        if isinstance(c, (Fraction, int)):  # slot padding is scalar
            return _F0
        return c.diff(0) * self.da0 + c.diff(1) * self.db0

    def _dT_elem(self, e: WElem) -> WElem:
        return e.d_dT(self._dT, self.dw2)

    def _embed(self, c) -> WElem:
        return WElem.from_poly(self.d1, self.d0, [c])

    def _even_series(self, entries: list, order: int) -> EpsSeries:
        cs = []
        for e in entries:
            cs.append(e)
            cs.append(self.zero_elem)
        return EpsSeries(cs, order, self.zero_elem)

    def _defects(self, v_entries, w_entries, a_entries, b_entries, order):
        V = self._even_series(v_entries, order)
        W = self._even_series(w_entries, order)
        A = self._even_series([self._embed(c) for c in a_entries], order)
        B = self._even_series([self._embed(c) for c in b_entries], order)
        Wm = W.shift(Fraction(-1), self._dT_elem)
        Wp = W.shift(Fraction(1), self._dT_elem)
        Vm = V.shift(Fraction(-1), self._dT_elem)
        Vp = V.shift(Fraction(1), self._dT_elem)
        one = EpsSeries.constant(self._embed(_F1), order, self.zero_elem)
        lam = lambda s: s.map(lambda e: e.mul_poly([_F0, _F1]))
        DV = A * ((V + Wm) * (V + Wp)) - lam(V * V - one)
        DW = B * ((W + Vm) * (W + Vp)) - lam(W * W - one)
        return DV, DW

    def run(self, K: int) -> tuple[list, list, list, list]:
        a_list: list = [self.a0]
        b_list: list = [self.b0]
        v_list: list = [self.v0]
        w_list: list = [self.w0]
        mshift = [(self.a0 + self.b0) * Fraction(-1), _F1]  # λ - a₀ - b₀
        for k in range(1, K + 1):
            DV, DW = self._defects(
                v_list + [self.zero_elem],
                w_list + [self.zero_elem],
                a_list + [Fraction(0)],
                b_list + [Fraction(0)],
                2 * k,
            )
            for odd in range(1, 2 * k, 2):
                assert DV.coefficient(odd).is_zero(), "odd defect order survived"
                assert DW.coefficient(odd).is_zero(), "odd defect order survived"
            R1 = DV.coefficient(2 * k)
            R2 = DW.coefficient(2 * k)
            ZV = R1.mul_poly(mshift) + R2.scale(self.a0 * Fraction(2))
            ZW = R2.mul_poly(mshift) + R1.scale(self.b0 * Fraction(2))
            # exact division by λ here is the solvability certificate
            baseV = ZV.div_lambda().div_w().scale(Fraction(1, 2))
            baseW = ZW.div_lambda().div_w().scale(Fraction(1, 2))
            P = baseV.contour_pair(self.vp)
            Q = baseW.contour_pair(self.vp)
            a_k = (self.s2 * Q - self.s1 * P) / self.det
            b_k = (self.t1 * P - self.s1 * Q) / self.det
            v_k = baseV + self.JA.scale(a_k) + self.JBa.scale(b_k)
            w_k = baseW + self.JBb.scale(a_k) + self.JA.scale(b_k)
            assert not v_k.contour_pair(self.vp), "string residual at V_k"
            assert not w_k.contour_pair(self.vp), "string residual at W_k"
            a_list.append(a_k)
            b_list.append(b_k)
            v_list.append(v_k)
            w_list.append(w_k)
        DV, DW = self._defects(v_list, w_list, a_list, b_list, 2 * K)
        for j in range(2 * K + 1):
            assert DV.coefficient(j).is_zero(), f"V-defect at ε^{j} is nonzero"
            assert DW.coefficient(j).is_zero(), f"W-defect at ε^{j} is nonzero"
        # a ↔ b symmetry of the whole tower
        swap = lambda c: c if isinstance(c, (Fraction, int)) else c.swapped()
        for vk, wk in zip(v_list, w_list):
            assert wk == vk.map_coeffs(swap), "V/W swap symmetry broken"
        for ak, bk in zip(a_list, b_list):
            assert bk == ak.swapped(), "a/b swap symmetry broken"
        return a_list, b_list, v_list, w_list


def _same_scalar(x, y, digits: int) -> bool:
    if is_exact(x) and is_exact(y):
        return as_fraction(x) == as_fraction(y)
    with mpmath.workdps(digits + 5):
        return abs(mpf_of(x, digits) - mpf_of(y, digits)) < mpmath.mpf(10) ** (
            -(digits // 2)
        )


_REGULAR_RUNS: dict = {}  # potential couplings -> (K, a_list, b_list, slopes, det)


def _regular_run(g: Potential, K: int):
    """The symbolic solve is temperature-independent, so share it per potential."""
    hit = _REGULAR_RUNS.get(g.gs)
    if hit is not None and hit[0] >= K:
        kmax, a_list, b_list, slopes, det = hit
        return a_list[: K + 1], b_list[: K + 1], slopes, det
    engine = _TwoCutRegularEngine(g)
    a_loc, b_loc, _, _ = engine.run(K)
    a_list = [c.to_ratfunc() for c in a_loc]
    b_list = [c.to_ratfunc() for c in b_loc]
    slopes = (engine.da0.to_ratfunc(), engine.db0.to_ratfunc())
    _REGULAR_RUNS[g.gs] = (K, a_list, b_list, slopes, engine.det_mp)
    return a_list, b_list, slopes, engine.det_mp


def expand_two_cut_regular(
    g: Potential, T, K: int, digits: int | None = None
) -> TwoCutExpansion:
    """Even-ε corrections (a_k, b_k), k ≤ K, on the two-cut branch at T.

    Raises SingularHodograph when the endpoint Jacobian degenerates at the
    phase point (that is a merging point, handled by the scaled series) and
    propagates NoTwoCutSolution from the phase solve.
    """
    if K < 0:
        raise ValueError("truncation order must be nonnegative")
    digits = digits or default_digits()
    try:
        a0, b0 = solve_two_cut(g, T, digits)
    except NoTwoCutSolution:
        # the boundary of the two-cut region is the merging temperature;
        # report it as the degeneracy it is rather than a missing solution
        for pt in find_merging(g, digits):
            if _same_scalar(T, pt.T_c, digits):
                raise SingularHodograph(
                    f"the cuts merge at T = {scalar_str(pt.T_c)}; "
                    "use the double-scaling path"
                ) from None
        raise
    a_list, b_list, slopes, det = _regular_run(g, K)
    if is_exact(a0) and is_exact(b0):
        pt = (as_fraction(a0), as_fraction(b0))
        singular = det.eval(pt) == 0
    else:
        with mpmath.workdps(digits):
            pt = (mpf_of(a0, digits), mpf_of(b0, digits))
            singular = abs(det.eval(pt)) < mpmath.mpf(10) ** (-(digits // 2))
    if singular:
        raise SingularHodograph(
            f"endpoint Jacobian vanishes at T = {scalar_str(T)}; "
            "the cuts are merging — use the double-scaling path"
        )
    return TwoCutExpansion(
        g=g,
        T=T,
        a0=a0,
        b0=b0,
        coeffs=tuple(zip(a_list, b_list)),
        slopes=slopes,
        K=K,
    )


# -- the merged-endpoint functional ---------------------------------------------


def build_F(g: Potential, T) -> FreeEnergy:
    """F(σ, τ) in the squared-endpoint chart; exact T required."""
    if not is_exact(T):
        raise ValueError("the endpoint functional needs an exact temperature")
    Tq = as_fraction(T)
    residue = merging_free_energy(g.gs)
    s = MPoly.var(2, 0)
    t = MPoly.var(2, 1)
    poly = residue + (s + t) * (Tq / 2)
    fe = FreeEnergy(g=g, T=Tq, poly=poly, residue_part=residue)
    assert fe.epd_defect().is_zero(), "contour term broke the EPD identity"
    return fe


def find_merging(g: Potential, digits: int | None = None) -> tuple[MergingPoint, ...]:
    """All admissible cut-merging points of the potential, graded by m.

    A candidate is a root r_c > 0 of Ψ(r) = ∮ V_λ/w_c (the stationarity of
    the merged endpoint functional in the vanishing cut) with temperature
    T_c = ∮ V_λ·λ/w_c = W(r_c) > 0.  Its order m is the first nonvanishing
    σ-moment φ_m; admissibility further needs γ₁ ≠ 0, without which the
    surviving endpoint degenerates too and the scaling ansatz below fails.

    Unlike the one-cut classification this is purely algebraic — no phase
    sampling — because the defining moments already are the derivatives of
    the endpoint functional.
    """
    digits = digits or default_digits()
    W = g.hodograph()
    psi = psi_poly(g.gs)
    found = []
    with mpmath.workdps(digits + 10):
        tol = mpmath.mpf(10) ** (-(digits // 2))
        for root in real_roots(psi, digits):
            r_c = root.value
            approx = mpf_of(r_c, digits + 10)
            if not approx > 0:
                continue
            T_c = W(r_c if root.exact else approx)
            if not T_c > 0:
                continue
            # the moment arithmetic is exact either way: an inexact root is
            # replaced by its binary rational, off the true root by far less
            # than the classification tolerance
            rc_arg = as_fraction(r_c) if root.exact else rationalize(approx)
            phis = []
            m = 0
            for k in range(1, 2 * len(g.gs) + 2):
                ph = phi_moment(g.gs, k, rc_arg)
                if not root.exact:
                    ph = mpf_of(ph, digits)
                phis.append(ph)
                nonzero = bool(ph) if root.exact else abs(ph) > tol
                if nonzero:
                    m = k
                    break
            if m == 0:
                continue  # every tested moment vanished; not a finite-order point
            gamma1 = gamma_moment(g.gs, 1, rc_arg)
            if not root.exact:
                gamma1 = mpf_of(gamma1, digits)
            degenerate = (not gamma1) if root.exact else abs(gamma1) <= tol
            if degenerate:
                continue
            found.append(
                MergingPoint(r_c=r_c, T_c=T_c, m=m, phi=tuple(phis), gamma1=gamma1)
            )
    found.sort(key=lambda p: mpf_of(p.r_c, digits))
    return tuple(found)


# -- the double-scaled symmetric engine -------------------------------------------


def _div_root(coeffs: list, root) -> list:
    """Exact synthetic division of a coefficient list by (λ - root)."""
    out: list = []
    acc = None
    for c in reversed(coeffs):
        acc = c if acc is None else c + acc * root
        out.append(acc)
    rem = out.pop() if out else None
    assert rem is None or _is_zero_coeff(rem), "inexact division at a pole"
    out.reverse()
    return out


def _two_pole_basis(elem: WElem, four_rc: Fraction, zero) -> tuple:
    """Split w_c·𝕍^{[k]} into (C, [A_j], [B_j]) over the two branch points.

    w_c·element has only even w-powers, i.e. it is a rational function with
    poles at λ = 0 and λ = 4r_c alone.  Clearing denominators and peeling
    the two pole towers top-down is exact at every step (certified), and
    the partial-fraction data converts linearly into the (C, A_j, B_j)
    table of the basis functions (λ-4r_c)/λ^j and λ/(λ-4r_c)^j.
    """
    Y = elem.mul_w()
    M = Y.max_key() // 2
    assert all(j % 2 == 0 for j in Y.slots), "odd w-power after clearing one"
    w2 = [_F0, -four_rc, _F1]
    w2_pow: list[list] = [[_F1]]
    for _ in range(M):
        w2_pow.append(_pmul(w2_pow[-1], w2))
    big: list = []
    for j in range(M + 1):
        big = _padd(big, _pmul(Y.slot(2 * j), w2_pow[M - j]))

    u_poles: dict = {}
    v_poles: dict = {}
    for i in range(M, 0, -1):
        at0 = big[0] if big else _F0
        at4 = None
        for c in reversed(big):
            at4 = c if at4 is None else c + at4 * four_rc
        if at4 is None:
            at4 = _F0
        u_i = at0 * Fraction(1, (-four_rc) ** i)
        v_i = at4 * Fraction(1, four_rc**i)
        u_poles[i] = u_i
        v_poles[i] = v_i
        shifted = [-four_rc, _F1]
        corr: list = [_F1]
        for _ in range(i):
            corr = _pmul(corr, shifted)
        big = _padd(big, [c * (-u_i) for c in corr])
        lam_i = [_F0] * i + [v_i]
        big = _padd(big, [-c for c in lam_i])
        big = _div_root(big, _F0)  # divide by λ, certified exact
        big = _div_root(big, four_rc)
    assert len(big) <= 1, "two-pole peeling left a λ-dependent remainder"
    const = big[0] if big else _F0

    A = [zero for _ in range(M)]
    B = [zero for _ in range(M)]
    prev = zero
    for i in range(M, 0, -1):  # u_i = A_{i+1} - 4r_c A_i
        A[i - 1] = (prev - u_poles[i]) * Fraction(1, four_rc)
        prev = A[i - 1]
    prev = zero
    for i in range(M, 0, -1):  # v_i = B_{i+1} + 4r_c B_i
        B[i - 1] = (v_poles[i] - prev) * Fraction(1, four_rc)
        prev = B[i - 1]
    C = const - (A[0] if A else zero) - (B[0] if B else zero)
    while A and _is_zero_coeff(A[-1]):
        A.pop()
    while B and _is_zero_coeff(B[-1]):
        B.pop()
    return C, A, B


class _SymmetricScaledEngine:
    """ε̄-expansion of the single merged equation; coefficients are DiffPolys.

    The pair of equations collapses because 𝔟(ε̄) = 𝔞(-ε̄) and 𝕎 = 𝕍(-ε̄):
    the second equation is the ε̄ → -ε̄ image of the first, so one defect
    with parity-flipped shifted slots carries all the content.
    """

    def __init__(self, g: Potential, point: MergingPoint):
        if not is_exact(point.r_c):
            raise ValueError("double-scaled series needs an exact merging point")
        self.g = g
        self.rc = as_fraction(point.r_c)
        self.Tc = as_fraction(point.T_c)
        self.m = point.m
        self.d1 = DiffPoly.const(-4 * self.rc)
        self.d0 = DiffPoly.zero()
        self.zero_elem = WElem.zero(self.d1, self.d0)
        self.v0 = WElem.from_poly(
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

    def _defect(self, v_entries: list, a_entries: list, order: int) -> EpsSeries:
        V = EpsSeries(v_entries, order, self.zero_elem)
        A = EpsSeries([self._embed(c) for c in a_entries], order, self.zero_elem)
        Vm = V.parity_flip().shift(Fraction(-1), self._dx_elem)
        Vp = V.parity_flip().shift(Fraction(1), self._dx_elem)
        one = EpsSeries.constant(self._embed(DiffPoly.const(1)), order, self.zero_elem)
        lhs = A * ((V + Vm) * (V + Vp))
        rhs = (V * V - one).map(lambda e: e.mul_poly([_F0, _F1]))
        return lhs - rhs

    def run(self, K: int) -> tuple[list, list]:
        a_entries = [DiffPoly.const(self.rc)] + [
            DiffPoly.var(f"a{k}") for k in range(1, K + 1)
        ]
        v_list = [self.v0]
        for k in range(1, K + 1):
            F = self._defect(v_list + [self.zero_elem], a_entries[: k + 1], k)
            R = F.coefficient(k)
            if k % 2 == 0:
                # unknown enters as -2w·𝕍^[k]
                v_k = R.div_w().scale(Fraction(1, 2))
            else:
                # unknown enters as -2(λ²/w)·𝕍^[k]; division by λ² certified
                v_k = R.mul_w().div_lambda().div_lambda().scale(Fraction(1, 2))
            v_list.append(v_k)
        F = self._defect(v_list, a_entries, K)
        for j in range(K + 1):
            assert F.coefficient(j).is_zero(), f"merged defect at ε̄^{j} is nonzero"

        ladder = []
        for k in range(K + 1):
            p = DiffPoly.zero() + v_list[k].contour_pair(self.vp)
            if k == 0:
                assert p == DiffPoly.const(self.Tc), "order-0 string must give T_c"
                ladder.append(XRelation(p - DiffPoly.const(self.Tc), DiffPoly.zero()))
            elif k == 2 * self.m:
                ladder.append(XRelation(p, DiffPoly.const(-1)))
            else:
                ladder.append(XRelation(p, DiffPoly.zero()))
        return v_list, ladder


def symmetric_scaled_series(g: Potential, point: MergingPoint, K: int) -> SymmetricTwoCut:
    """Double-scaled series at a merging point, to order ε̄^K (K ≥ 2m+1).

    Orders carry their two-pole tables; the k-th ladder entry is certified
    against the moment form Σ_j (φ_j A_j^{[k]} + γ_j B_j^{[k]}) before being
    returned, which ties the contour integrals to the pole tables and to
    the classification data of the merging point.
    """
    if K < 2 * point.m + 1:
        raise ValueError("need K ≥ 2m+1 to reach the closing pair of relations")
    engine = _SymmetricScaledEngine(g, point)
    rc = engine.rc
    # the merged strings: ∮V_λ·λ/w_c = T_c and ∮V_λ/w_c = 0
    lam_over_w = engine.v0
    one_over_w = WElem.from_poly(engine.d1, engine.d0, [DiffPoly.const(1)], wpow=1)
    assert DiffPoly.zero() + lam_over_w.contour_pair(engine.vp) == DiffPoly.const(
        engine.Tc
    )
    assert _is_zero_coeff(DiffPoly.zero() + one_over_w.contour_pair(engine.vp))

    v_list, ladder = engine.run(K)
    four_rc = 4 * rc
    orders = [
        SymmetricScaledOrder(
            k=0, element=v_list[0], C=DiffPoly.zero(), A=(), B=()
        )
    ]
    phis = [phi_moment(g.gs, j, rc) for j in range(1, K // 2 + 1)]
    gammas = [gamma_moment(g.gs, j, rc) for j in range(1, K // 2 + 1)]
    for k in range(1, K + 1):
        C, A, B = _two_pole_basis(v_list[k], four_rc, DiffPoly.zero())
        assert len(A) <= k // 2 and len(B) <= k // 2, "pole depth exceeded k/2"
        # the ladder relation must equal its moment form (C drops out since
        # ∮V_λ/w_c = 0 at a merging point)
        moment = DiffPoly.zero()
        for j, Aj in enumerate(A, start=1):
            moment = moment + Aj * phis[j - 1]
        for j, Bj in enumerate(B, start=1):
            moment = moment + Bj * gammas[j - 1]
        assert ladder[k].p == moment, f"ladder/moment mismatch at order {k}"
        orders.append(SymmetricScaledOrder(k=k, element=v_list[k], C=C, A=tuple(A), B=tuple(B)))
    return SymmetricTwoCut(point=point, K=K, orders=tuple(orders), ladder=tuple(ladder))
