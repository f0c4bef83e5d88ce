"""Laurent elements on the spectral curve, and truncated ε-series over them.

The large-N engines manipulate quantities of the shape

    Σ_j  N_j(λ) / w^j,        w² = λ² + d1·λ + d0   (monic),

with the N_j polynomials in λ over some exact coefficient ring (Fractions,
univariate or multivariate rational functions, or differential
polynomials).  ``WElem`` stores them in a normal form — deg N_j ≤ 1 for
j ≥ 2, arbitrary degree at j ∈ {0, 1} — closed under ring operations,
division by w² and by linear polynomials, and d/dT with moving branch
points.

Coefficients only need +, -, *, ** on themselves, coercion of Fraction
scalars from either side, and truthiness == nonzero.  All arithmetic is
exact; nothing here touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Sequence

from .structured import branch_coeff

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _trim(coeffs: list) -> list:
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    return coeffs


def _padd(a: list, b: list) -> list:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = out[i] + c
    return _trim(out)


def _pmul(a: Sequence, b: Sequence) -> list:
    if not a or not b:
        return []
    out = [_ZERO] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if not ca:
            continue
        for j, cb in enumerate(b):
            if not cb:
                continue
            out[i + j] = out[i + j] + ca * cb
    return _trim(out)


def _pscale(a: Sequence, s) -> list:
    return _trim([c * s for c in a])


class WElem:
    """One element Σ_j N_j/w^j of the curve's Laurent module.

    ``slots`` maps j ≥ 0 to the coefficient list of N_j (index = λ-power).
    The branch data (d1, d0) ride along on every element; binary operations
    assert they agree.
    """

    __slots__ = ("d1", "d0", "slots")

    def __init__(self, d1, d0, slots: dict | None = None):
        self.d1 = d1
        self.d0 = d0
        self.slots = {}
        if slots:
            for j, coeffs in slots.items():
                cs = _trim(list(coeffs))
                if cs:
                    self.slots[j] = cs
        self._normalize()

    # -- construction ---------------------------------------------------

    @classmethod
    def zero(cls, d1, d0) -> "WElem":
        return cls(d1, d0, {})

    @classmethod
    def from_poly(cls, d1, d0, coeffs: Sequence, wpow: int = 0) -> "WElem":
        """coeffs(λ)/w^wpow."""
        return cls(d1, d0, {wpow: list(coeffs)})

    def _w2_poly(self) -> list:
        return [self.d0, self.d1, _ONE]

    def _normalize(self) -> None:
        # Reduce λ² ≡ w² - d1·λ - d0 in every slot with j ≥ 2.  The w²
        # overflow drops exactly two keys, so walking j downward one step
        # at a time also catches slots the pass itself creates.
        top = max(self.slots, default=0)
        for j in range(top, 1, -1):
            if j not in self.slots:
                continue
            cs = self.slots[j]
            overflow: list = []
            while len(cs) > 2:
                top = cs.pop()
                k = len(cs) - 2  # λ-power of the quotient term
                if not top:
                    continue
                while len(overflow) <= k:
                    overflow.append(_ZERO)
                overflow[k] = overflow[k] + top
                cs[k + 1] = cs[k + 1] - top * self.d1
                cs[k] = cs[k] - top * self.d0
            _trim(cs)
            if not cs:
                del self.slots[j]
            if _trim(overflow):
                tgt = j - 2
                self.slots[tgt] = _padd(self.slots.get(tgt, []), overflow)
                if not self.slots[tgt]:
                    del self.slots[tgt]
        for j in [k for k, v in self.slots.items() if not v]:
            del self.slots[j]

    def _check_mate(self, other: "WElem") -> None:
        if self.d1 != other.d1 or self.d0 != other.d0:
            raise ValueError("branch data mismatch")

    # -- ring structure ---------------------------------------------------

    def __add__(self, other: "WElem") -> "WElem":
        self._check_mate(other)
        out = {j: list(cs) for j, cs in self.slots.items()}
        for j, cs in other.slots.items():
            out[j] = _padd(out.get(j, []), cs)
        return WElem(self.d1, self.d0, out)

    def __neg__(self) -> "WElem":
        return WElem(
            self.d1, self.d0, {j: [-c for c in cs] for j, cs in self.slots.items()}
        )

    def __sub__(self, other: "WElem") -> "WElem":
        return self + (-other)

    def __mul__(self, other) -> "WElem":
        if not isinstance(other, WElem):
            return self.scale(other)
        self._check_mate(other)
        out: dict = {}
        for ja, ca in self.slots.items():
            for jb, cb in other.slots.items():
                prod = _pmul(ca, cb)
                if prod:
                    j = ja + jb
                    out[j] = _padd(out.get(j, []), prod) if j in out else prod
        return WElem(self.d1, self.d0, out)

    def __rmul__(self, other) -> "WElem":
        return self.scale(other)

    def scale(self, s) -> "WElem":
        return WElem(
            self.d1, self.d0, {j: _pscale(cs, s) for j, cs in self.slots.items()}
        )

    def mul_poly(self, coeffs: Sequence) -> "WElem":
        return WElem(
            self.d1,
            self.d0,
            {j: _pmul(cs, coeffs) for j, cs in self.slots.items()},
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, WElem):
            return NotImplemented
        self._check_mate(other)
        return self.slots == other.slots

    def __bool__(self) -> bool:
        return bool(self.slots)

    def is_zero(self) -> bool:
        return not self.slots

    # -- w-moves ----------------------------------------------------------

    def mul_w2(self) -> "WElem":
        return self.mul_poly(self._w2_poly())

    def div_w2(self) -> "WElem":
        return WElem(self.d1, self.d0, {j + 2: cs for j, cs in self.slots.items()})

    def mul_w(self) -> "WElem":
        out: dict = {}
        for j, cs in self.slots.items():
            if j >= 1:
                out[j - 1] = _padd(out.get(j - 1, []), cs)
            else:
                out[1] = _padd(out.get(1, []), _pmul(cs, self._w2_poly()))
        return WElem(self.d1, self.d0, out)

    def div_w(self) -> "WElem":
        return WElem(self.d1, self.d0, {j + 1: cs for j, cs in self.slots.items()})

    # -- division by linear polynomials ------------------------------------

    def div_linear_root(self, r) -> "WElem":
        """Divide by (λ - r) where r is a branch point: r² + d1·r + d0 = 0.

        Uses 1/(λ-r) = (λ + d1 + r)/w², which keeps everything polynomial.
        """
        if r * r + self.d1 * r + self.d0:
            raise ValueError("not a root of w²")
        cofactor = [self.d1 + r, _ONE]
        return WElem(
            self.d1,
            self.d0,
            {j + 2: _pmul(cs, cofactor) for j, cs in self.slots.items()},
        )

    def div_lambda(self) -> "WElem":
        """Exact division by λ.  Raises ValueError if it does not divide."""
        if not self.d0:
            return self.div_linear_root(_ZERO)
        # λ is not a branch point; solve λ·Z = self per key, descending so
        # each slot's w²-overflow (from λ² ≡ w² - d1·λ - d0) is known when
        # the two keys below it are handled.
        zslots: dict = {}
        carry: dict = {}  # overflow into lower keys, by key
        inv_d0 = None
        top = max(self.slots, default=0)
        for j in range(top, 1, -1):
            if j not in self.slots and j not in carry:
                continue
            cs = self.slots.get(j, [])
            p0 = cs[0] if len(cs) > 0 else _ZERO
            p1 = cs[1] if len(cs) > 1 else _ZERO
            if j in carry:
                p0 = p0 - carry.pop(j)
            # λ(r + sλ) = -d0·s + (r - d1·s)λ + s·w²  ⇒  s = -p0/d0, r = p1 + d1·s
            if inv_d0 is None:
                inv_d0 = _reciprocal(self.d0)
            s = -(p0 * inv_d0)
            r = p1 + self.d1 * s
            out = _trim([r, s])
            if out:
                zslots[j] = out
            if s:
                carry[j - 2] = carry.get(j - 2, _ZERO) + s
        for j in (1, 0):
            cs = list(self.slots.get(j, []))
            if j in carry:
                c = carry.pop(j)
                if cs:
                    cs[0] = cs[0] - c
                else:
                    cs = [-c]
            _trim(cs)
            if not cs:
                continue
            if cs[0]:
                raise ValueError("element is not divisible by λ")
            zslots[j] = cs[1:]
        if carry and any(carry.values()):
            raise ValueError("element is not divisible by λ")
        return WElem(self.d1, self.d0, zslots)

    # -- calculus -----------------------------------------------------------

    def d_dT(self, derive: Callable, dw2: Sequence | None) -> "WElem":
        """Parameter derivative with coefficient derivation ``derive`` and
        d(w²)/dT = dw2[0] + dw2[1]·λ (None when the curve is frozen)."""
        out: dict = {}
        for j, cs in self.slots.items():
            dcs = _trim([derive(c) for c in cs])
            if dcs:
                out[j] = _padd(out.get(j, []), dcs)
            if dw2 is not None and j:
                tail = _pmul(cs, _pscale(dw2, -Fraction(j, 2)))
                if tail:
                    out[j + 2] = _padd(out.get(j + 2, []), tail)
        return WElem(self.d1, self.d0, out)

    def map_coeffs(self, f: Callable) -> "WElem":
        return WElem(
            self.d1, self.d0, {j: [f(c) for c in cs] for j, cs in self.slots.items()}
        )

    # -- extraction -----------------------------------------------------------

    def slot(self, j: int) -> list:
        return list(self.slots.get(j, []))

    def coeff(self, j: int, power: int):
        cs = self.slots.get(j, [])
        return cs[power] if power < len(cs) else _ZERO

    def max_key(self) -> int:
        return max(self.slots) if self.slots else 0

    def contour_pair(self, weight: Sequence):
        """∮ weight(λ)·self · dλ/(2πi) over a cycle around both cuts.

        Equals the residue at infinity (with sign absorbed by the branch
        w ~ +λ); only odd w-powers contribute a branch cut, and the j = 0
        slot is polynomial, hence residue-free.  Even j ≥ 2 slots would be
        honest rational functions — the engines never produce them inside a
        string integrand, so they are rejected loudly.
        """
        acc = None
        for j, cs in self.slots.items():
            if j == 0:
                continue
            if j % 2 == 0:
                raise ValueError("even w-power inside a contour integrand")
            num = _pmul(cs, list(weight))
            term = branch_coeff(num, self.d1, self.d0, -j, 0, -1)
            acc = term if acc is None else acc + term
        return acc if acc is not None else _ZERO

    def __repr__(self) -> str:  # debug aid only
        bits = []
        for j in sorted(self.slots):
            bits.append(f"w^-{j}*{self.slots[j]!r}")
        return "WElem(" + " + ".join(bits) + ")" if bits else "WElem(0)"


def _reciprocal(c):
    """1/c for the coefficient rings in play."""
    if isinstance(c, (Fraction, int)):
        return Fraction(1) / c
    one = c * 0 + Fraction(1)
    return one / c


# -- truncated ε-series ----------------------------------------------------


class EpsSeries:
    """Σ_k c_k ε^k, truncated: coefficients are valid for k ≤ order.

    Coefficients are any ring with +, -, * among themselves; ``zero`` is an
    explicit witness used for padding.  ``shift`` implements f(x ± s) as the
    Taylor operator e^{sε·∂} given a derivation on the coefficients.
    """

    __slots__ = ("coeffs", "order", "zero")

    def __init__(self, coeffs: Sequence, order: int, zero):
        self.order = order
        self.zero = zero
        cs = list(coeffs[: order + 1])
        while len(cs) < order + 1:
            cs.append(zero)
        self.coeffs = cs

    @classmethod
    def constant(cls, c, order: int, zero) -> "EpsSeries":
        return cls([c], order, zero)

    def coefficient(self, k: int):
        if k > self.order:
            raise IndexError(f"series truncated at ε^{self.order}")
        return self.coeffs[k]

    def __add__(self, other: "EpsSeries") -> "EpsSeries":
        order = min(self.order, other.order)
        return EpsSeries(
            [self.coeffs[k] + other.coeffs[k] for k in range(order + 1)],
            order,
            self.zero,
        )

    def __neg__(self) -> "EpsSeries":
        return EpsSeries([-c for c in self.coeffs], self.order, self.zero)

    def __sub__(self, other: "EpsSeries") -> "EpsSeries":
        return self + (-other)

    def __mul__(self, other: "EpsSeries") -> "EpsSeries":
        order = min(self.order, other.order)
        out = [self.zero for _ in range(order + 1)]
        for i in range(order + 1):
            ci = self.coeffs[i]
            if not ci:
                continue
            for j in range(order + 1 - i):
                cj = other.coeffs[j]
                if not cj:
                    continue
                out[i + j] = out[i + j] + ci * cj
        return EpsSeries(out, order, self.zero)

    def scale(self, s) -> "EpsSeries":
        return EpsSeries([c * s for c in self.coeffs], self.order, self.zero)

    def parity_flip(self) -> "EpsSeries":
        """ε → -ε."""
        return EpsSeries(
            [c if k % 2 == 0 else -c for k, c in enumerate(self.coeffs)],
            self.order,
            self.zero,
        )

    def shift(self, s, derive: Callable) -> "EpsSeries":
        """Taylor shift e^{s·ε·D}: new c_k = Σ_i s^i/i! · D^i c_{k-i}."""
        # iterated derivatives computed lazily per source coefficient
        derivs = [[c] for c in self.coeffs]
        out = []
        for k in range(self.order + 1):
            acc = self.coeffs[k]
            fact = Fraction(1)
            for i in range(1, k + 1):
                fact = fact * s / i
                row = derivs[k - i]
                while len(row) <= i:
                    row.append(derive(row[-1]))
                term = row[i]
                if term:
                    acc = acc + term * fact
            out.append(acc)
        return EpsSeries(out, self.order, self.zero)

    def map(self, f: Callable) -> "EpsSeries":
        return EpsSeries([f(c) for c in self.coeffs], self.order, self.zero)

    def __repr__(self) -> str:
        return f"EpsSeries({self.coeffs!r}, order={self.order})"
