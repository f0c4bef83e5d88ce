"""Real root finding for exact polynomials.

Roots are isolated exactly (Sturm sequences over ``Fraction``), refined with
bisection/Newton in mpmath, and reported with their multiplicities from a
Yun squarefree decomposition.  Roots that are in fact rational are detected
by continued-fraction reconstruction plus an exact check, so downstream
code can stay in exact arithmetic whenever the data allows it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import mpmath

from .errors import PrecisionExhausted
from .polys import Poly
from .scalars import Scalar, default_digits, mpf_of

_MAX_RECON_DEN = 10**6


@dataclass(frozen=True)
class RealRoot:
    """One real root: exact if ``value`` is a Fraction, else a refined mpf."""

    value: Scalar
    multiplicity: int
    exact: bool


def yun_squarefree(p: Poly) -> list[tuple[Poly, int]]:
    """Yun's algorithm: [(factor, multiplicity)] with monic squarefree factors.

    The product of factor**multiplicity recovers p up to a constant.
    """
    if p.degree < 1:
        return []
    p = p * (1 / p.leading())
    g = p.gcd(p.derivative())
    if g.degree == 0:
        return [(p, 1)]
    w = p.exact_div(g)
    z = p.derivative().exact_div(g) - w.derivative()
    out = []
    k = 1
    while w.degree > 0:
        f = w.gcd(z)
        if f.degree > 0:
            out.append((f, k))
            w = w.exact_div(f)
            z = z.exact_div(f) - w.derivative()
        else:
            z = z - w.derivative()
        k += 1
    return out


def _sturm_chain(p: Poly) -> list[Poly]:
    chain = [p, p.derivative()]
    while chain[-1].degree > 0:
        r = chain[-2] % chain[-1]
        if r.is_zero():
            break
        chain.append(-r)
    return chain


def _sign_changes(chain: list[Poly], x: Fraction) -> int:
    signs = []
    for q in chain:
        v = q(x)
        if v:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _count_roots(chain, lo: Fraction, hi: Fraction) -> int:
    """Number of distinct real roots in (lo, hi]."""
    return _sign_changes(chain, lo) - _sign_changes(chain, hi)


def _root_bound(p: Poly) -> Fraction:
    """Cauchy bound: all real roots lie in (-B, B)."""
    lead = abs(p.leading())
    b = max((abs(c) for c in p.coeffs[:-1]), default=Fraction(0))
    return 1 + b / lead


def _isolate(p: Poly, lo: Fraction, hi: Fraction) -> list[tuple[Fraction, Fraction]]:
    """Intervals (lo, hi] each containing exactly one root of squarefree p."""
    chain = _sturm_chain(p)
    eps = Fraction(1, 2)
    while p(lo) == 0:
        lo -= eps
        eps /= 2
    eps = Fraction(1, 2)
    while p(hi) == 0:
        hi += eps
        eps /= 2
    work = [(lo, hi)]
    found = []
    while work:
        a, b = work.pop()
        n = _count_roots(chain, a, b)
        if n == 0:
            continue
        if n == 1:
            found.append((a, b))
            continue
        mid = (a + b) / 2
        attempts = 0
        while p(mid) == 0:
            mid += (b - a) / Fraction(1009 + attempts)
            attempts += 1
        work.append((a, mid))
        work.append((mid, b))
    found.sort()
    return found


def _try_rational(p: Poly, x_mpf, max_den: int = _MAX_RECON_DEN) -> Optional[Fraction]:
    """Reconstruct a nearby small rational and verify it is an exact root."""
    try:
        cand = Fraction(float(x_mpf)).limit_denominator(max_den)
    except (OverflowError, ValueError):
        return None
    return cand if p(cand) == 0 else None


def _refine(p: Poly, lo: Fraction, hi: Fraction, digits: int):
    """Shrink (lo, hi) around its single root, then Newton-polish in mpf.

    Returns (value, lo, hi) where value is a Fraction when bisection landed
    on the root exactly, else an mpf.
    """
    f_lo = p(lo)
    if f_lo == 0:
        return lo, lo, lo
    target = Fraction(1, 10 ** (digits + 5))
    sign_lo = f_lo > 0
    for _ in range(20000):
        if hi - lo < target:
            break
        mid = (lo + hi) / 2
        v = p(mid)
        if v == 0:
            return mid, mid, mid
        if (v > 0) == sign_lo:
            lo = mid
        else:
            hi = mid
    else:  # pragma: no cover - loop bound is generous
        raise PrecisionExhausted("bisection failed to converge")
    with mpmath.workdps(digits + 10):
        x = (mpf_of(lo, digits + 10) + mpf_of(hi, digits + 10)) / 2
        dp = p.derivative()
        for _ in range(50):
            d = dp(x)
            if d == 0:
                break
            step = p(x) / d
            x -= step
            if abs(step) < mpmath.mpf(10) ** (-(digits + 6)):
                break
        x_out = +x
    return x_out, lo, hi


def real_roots(p: Poly, digits: int | None = None,
               lo: Fraction | None = None,
               hi: Fraction | None = None) -> list[RealRoot]:
    """All real roots of p (optionally within [lo, hi]), sorted ascending.

    Exact rational roots come back as Fractions with ``exact=True``;
    the rest are mpf values accurate to roughly ``digits`` digits.
    """
    digits = digits or default_digits()
    if p.is_zero():
        raise ValueError("zero polynomial has every point as a root")
    roots: list[RealRoot] = []
    for factor, mult in yun_squarefree(p):
        bound = _root_bound(factor)
        a = Fraction(lo) if lo is not None else -bound
        b = Fraction(hi) if hi is not None else bound
        if a >= b:
            continue
        if factor.degree == 1:
            r = -factor[0] / factor[1]
            if a <= r <= b:
                roots.append(RealRoot(r, mult, True))
            continue
        for ia, ib in _isolate(factor, a, b):
            x, flo, fhi = _refine(factor, ia, ib, digits)
            if isinstance(x, Fraction):
                if a <= x <= b:
                    roots.append(RealRoot(x, mult, True))
                continue
            cand = _try_rational(factor, x)
            if cand is not None and flo <= cand <= fhi:
                if a <= cand <= b:
                    roots.append(RealRoot(cand, mult, True))
            else:
                with mpmath.workdps(digits + 5):
                    in_range = mpf_of(a, digits + 5) <= x <= mpf_of(b, digits + 5)
                if in_range:
                    roots.append(RealRoot(x, mult, False))

    def _key(r: RealRoot):
        with mpmath.workdps(digits + 5):
            return mpf_of(r.value, digits + 5)

    roots.sort(key=_key)
    return roots


def positive_roots(p: Poly, digits: int | None = None) -> list[RealRoot]:
    """Real roots with value > 0, ascending."""
    return [r for r in real_roots(p, digits) if r.value > 0]
