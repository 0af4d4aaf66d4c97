"""Polynomials and rational functions in t over an exact base ring.

These are the global objects of the curve module; local Laurent
expansions at rational points (or infinity) produce LaurentSeries.
No gcd cancellation is performed: orders of vanishing are extracted by
exact division, so uncancelled representations stay correct.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import BaseMismatch, DivisionByZeroPolynomial, NotAUnit
from .rings import QQ, BaseRing, RingElem
from .series import DEFAULT_PREC, LaurentSeries


class Poly:
    """Polynomial in t with RingElem coefficients, stored sparsely."""

    __slots__ = ("base", "coeffs")

    def __init__(self, base: BaseRing, coeffs=None):
        self.base = base
        clean: dict[int, RingElem] = {}
        if coeffs:
            for e, c in coeffs.items() if isinstance(coeffs, dict) else coeffs:
                if e < 0:
                    raise ValueError("polynomial exponents must be nonnegative")
                c = base(c) if not isinstance(c, RingElem) else c
                if not c.is_zero:
                    clean[e] = clean.get(e, base.zero()) + c
        self.coeffs = {e: c for e, c in clean.items() if not c.is_zero}

    @staticmethod
    def const(base: BaseRing, value) -> Poly:
        return Poly(base, {0: base(value)})

    @staticmethod
    def t(base: BaseRing) -> Poly:
        return Poly(base, {1: base.one()})

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        """Degree of the stored polynomial (-1 for zero)."""
        return max(self.coeffs) if self.coeffs else -1

    def coefficient(self, e: int) -> RingElem:
        return self.coeffs.get(e, self.base.zero())

    def reduction(self) -> Poly:
        return Poly(QQ, {e: QQ(c.reduction()) for e, c in self.coeffs.items()})

    def __add__(self, other: Poly) -> Poly:
        self._check(other)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, self.base.zero()) + c
        return Poly(self.base, out)

    def __neg__(self) -> Poly:
        return Poly(self.base, {e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other: Poly) -> Poly:
        return self + (-other)

    def __mul__(self, other: Poly) -> Poly:
        self._check(other)
        out: dict[int, RingElem] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                p = c1 * c2
                if not p.is_zero:
                    e = e1 + e2
                    out[e] = out.get(e, self.base.zero()) + p
        return Poly(self.base, out)

    def scale(self, c) -> Poly:
        c = self.base(c) if not isinstance(c, RingElem) else c
        return Poly(self.base, {e: c * v for e, v in self.coeffs.items()})

    def _check(self, other: Poly):
        if self.base != other.base:
            raise BaseMismatch("mixed base rings")

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.base == other.base and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.base, tuple(sorted(self.coeffs.items()))))

    def derivative(self) -> Poly:
        return Poly(
            self.base,
            {e - 1: c * self.base(e) for e, c in self.coeffs.items() if e != 0},
        )

    def eval_at(self, a: Fraction) -> RingElem:
        acc = self.base.zero()
        for e, c in self.coeffs.items():
            acc = acc + c * self.base(Fraction(a) ** e)
        return acc

    def compose_shift(self, a: Fraction) -> Poly:
        """p(a + t) as a polynomial in t."""
        a = Fraction(a)
        if a == 0 or self.is_zero:
            return self
        result: dict[int, RingElem] = {}
        d = self.degree()
        pow_coeffs: dict[int, Fraction] = {0: Fraction(1)}  # (a + t)^e
        for e in range(0, d + 1):
            c = self.coeffs.get(e)
            if c is not None:
                for k, b in pow_coeffs.items():
                    coeff = c * self.base(b)
                    if not coeff.is_zero:
                        result[k] = result.get(k, self.base.zero()) + coeff
            nxt: dict[int, Fraction] = {}
            for k, b in pow_coeffs.items():
                nxt[k] = nxt.get(k, Fraction(0)) + b * a
                nxt[k + 1] = nxt.get(k + 1, Fraction(0)) + b
            pow_coeffs = nxt
        return Poly(self.base, result)

    def reverse(self) -> tuple[Poly, int]:
        """Return (p(1/s)*s^deg as a polynomial in s, deg)."""
        d = self.degree()
        if d < 0:
            return Poly(self.base), 0
        return Poly(self.base, {d - e: c for e, c in self.coeffs.items()}), d

    def divide_linear(self, a: Fraction) -> Poly | None:
        """Exact quotient by (t - a), or None if (t - a) does not divide."""
        if self.is_zero:
            return self
        a = Fraction(a)
        d = self.degree()
        if d == 0:
            return None
        dense = [self.coefficient(e) for e in range(d + 1)]
        quot = [self.base.zero()] * d
        carry = self.base.zero()
        for e in range(d, 0, -1):
            qe = dense[e] + carry
            quot[e - 1] = qe
            carry = qe * self.base(a)
        rem = dense[0] + carry
        if not rem.is_zero:
            return None
        return Poly(self.base, dict(enumerate(quot)))

    def multiplicity_at(self, a: Fraction) -> int:
        """Order of vanishing at t = a (of the full polynomial)."""
        m = 0
        p = self
        while not p.is_zero:
            q = p.divide_linear(a)
            if q is None:
                break
            p, m = q, m + 1
        return m

    def __str__(self):
        if self.is_zero:
            return "0"
        return str(self.to_series())

    __repr__ = __str__

    def to_series(self) -> LaurentSeries:
        return LaurentSeries(self.base, dict(self.coeffs), None)


def rational_roots(p: Poly) -> list[Fraction]:
    """All rational roots of a nonzero polynomial over Q, without multiplicity."""
    if p.base != QQ:
        p = p.reduction()
    if p.is_zero:
        raise ValueError("zero polynomial")
    # strip t^k
    shift = min(p.coeffs)
    roots = set()
    if shift > 0:
        roots.add(Fraction(0))
        p = Poly(QQ, {e - shift: c for e, c in p.coeffs.items()})
    # clear denominators -> integer polynomial
    dense = {e: c.rational_value() for e, c in p.coeffs.items()}
    if not dense:
        return sorted(roots)
    lcm = 1
    for q in dense.values():
        lcm = lcm * q.denominator // _gcd(lcm, q.denominator)
    ints = {e: int(q * lcm) for e, q in dense.items()}
    d = max(ints)
    a0 = ints.get(0, 0)
    an = ints[d]
    if a0 == 0:
        # should not happen after stripping
        return sorted(roots)
    for num in _divisors(abs(a0)):
        for den in _divisors(abs(an)):
            for cand in (Fraction(num, den), Fraction(-num, den)):
                if p.eval_at(cand).is_zero:
                    roots.add(cand)
    return sorted(roots)


def has_irrational_root(p: Poly) -> bool:
    """True if the polynomial over Q has a root outside Q."""
    if p.base != QQ:
        p = p.reduction()
    if p.is_zero:
        return False
    q = Poly(QQ, {e - min(p.coeffs): c for e, c in p.coeffs.items()})
    for r in rational_roots(p):
        while True:
            nxt = q.divide_linear(r)
            if nxt is None:
                break
            q = nxt
    return q.degree() >= 1


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _divisors(n: int) -> list[int]:
    if n == 0:
        return [1]
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


class RatFunc:
    """Quotient of polynomials; denominator reduction must be nonzero."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None):
        if den is None:
            den = Poly.const(num.base, 1)
        if num.base != den.base:
            raise BaseMismatch("mixed base rings")
        if den.reduction().is_zero:
            raise DivisionByZeroPolynomial("denominator reduces to the zero polynomial")
        self.num = num
        self.den = den

    @property
    def base(self) -> BaseRing:
        return self.num.base

    @staticmethod
    def const(base: BaseRing, value) -> RatFunc:
        return RatFunc(Poly.const(base, value))

    @staticmethod
    def t(base: BaseRing) -> RatFunc:
        return RatFunc(Poly.t(base))

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    def __add__(self, other: RatFunc) -> RatFunc:
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    def __sub__(self, other: RatFunc) -> RatFunc:
        return self + (-other)

    def __neg__(self) -> RatFunc:
        return RatFunc(-self.num, self.den)

    def __mul__(self, other: RatFunc) -> RatFunc:
        return RatFunc(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: RatFunc) -> RatFunc:
        if other.num.reduction().is_zero:
            raise DivisionByZeroPolynomial("division by a rational function with zero reduction")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __pow__(self, n: int) -> RatFunc:
        if n < 0:
            return (RatFunc.const(self.base, 1) / self) ** (-n)
        out = RatFunc.const(self.base, 1)
        b = self
        while n:
            if n & 1:
                out = out * b
            b = b * b
            n >>= 1
        return out

    def derivative(self) -> RatFunc:
        return RatFunc(
            self.num.derivative() * self.den - self.num * self.den.derivative(),
            self.den * self.den,
        )

    def reduction(self) -> RatFunc:
        return RatFunc(self.num.reduction(), self.den.reduction())

    def order_at(self, point) -> int:
        """Order of vanishing of the reduction at a rational point or infinity."""
        num, den = self.num.reduction(), self.den.reduction()
        if num.is_zero:
            raise ValueError("order of the zero function")
        if point is INFINITY:
            return den.degree() - num.degree()
        a = Fraction(point)
        return num.multiplicity_at(a) - den.multiplicity_at(a)

    def expand_at(self, point, prec: int | None = None) -> LaurentSeries:
        """Laurent expansion in the local coordinate at a rational point or infinity.

        The local coordinate is (t - a) at finite a and s = 1/t at infinity.
        Exact when the localized denominator is a scaled monomial.
        """
        if self.num.is_zero:
            return LaurentSeries.zero(self.base)
        if point is INFINITY:
            pnum, dnum = self.num.reverse()
            pden, dden = self.den.reverse()
            shift = dden - dnum
            num_s = pnum.to_series().shift(shift) if shift >= 0 else pnum.to_series()
            den_s = pden.to_series() if shift >= 0 else pden.to_series().shift(-shift)
        else:
            a = Fraction(point)
            num_s = self.num.compose_shift(a).to_series()
            den_s = self.den.compose_shift(a).to_series()
        if den_s.is_zero():
            raise DivisionByZeroPolynomial("denominator vanishes identically at the point")
        if len(den_s.coeffs) == 1 and next(iter(den_s.coeffs.values())).is_unit:
            (e, c), = den_s.coeffs.items()
            out = num_s.shift(-e).scale(c.inverse())
            return out if prec is None else out.truncate(prec)
        try:
            inv = den_s.invert(prec=(prec if prec is not None else DEFAULT_PREC))
        except NotAUnit:
            raise DivisionByZeroPolynomial("denominator has zero reduction at the point")
        return num_s * inv

    def __str__(self):
        if self.den == Poly.const(self.base, 1):
            return str(self.num)
        return f"({self.num})/({self.den})"

    __repr__ = __str__


class _Infinity:
    """The point at infinity on P1."""

    def __repr__(self):
        return "oo"


INFINITY = _Infinity()
