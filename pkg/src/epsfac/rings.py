"""Exact coefficient rings: the rationals and their nilpotent extensions.

A base ring is either Q or Q[eps]/(eps^N) with N >= 2.  Elements store
their coefficients as exact ``fractions.Fraction`` values; no floats
appear anywhere.  Reduction modulo nilpotents (eps -> 0) is a ring
homomorphism onto Q.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import BaseMismatch, NotAUnit


@dataclass(frozen=True)
class BaseRing:
    """Q (order 1) or Q[eps]/(eps^order) for order >= 2."""

    order: int = 1

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("nilpotency order must be >= 1")

    @property
    def is_rationals(self) -> bool:
        return self.order == 1

    @property
    def kind(self) -> str:
        return "rationals" if self.order == 1 else "nilpotent"

    def __repr__(self):
        return "QQ" if self.order == 1 else f"QQ[eps]/(eps^{self.order})"

    # -- element constructors -------------------------------------------

    def __call__(self, value) -> RingElem:
        """Coerce a rational number (or RingElem) into this ring."""
        if isinstance(value, RingElem):
            if value.base != self:
                raise BaseMismatch(f"cannot coerce {value} from {value.base} into {self}")
            return value
        return RingElem(self, (Fraction(value),) + (Fraction(0),) * (self.order - 1))

    def zero(self) -> RingElem:
        return self(0)

    def one(self) -> RingElem:
        return self(1)

    def eps(self, power: int = 1) -> RingElem:
        """The nilpotent generator eps^power (zero when power >= order)."""
        if self.order == 1:
            raise ValueError("the rationals have no nilpotent generator")
        coeffs = [Fraction(0)] * self.order
        if power < self.order:
            coeffs[power] = Fraction(1)
        return RingElem(self, tuple(coeffs))

    def from_coeffs(self, coeffs) -> RingElem:
        cs = [Fraction(c) for c in coeffs]
        if len(cs) > self.order:
            cs = cs[: self.order]
        cs += [Fraction(0)] * (self.order - len(cs))
        return RingElem(self, tuple(cs))


QQ = BaseRing(1)


def dual_numbers(order: int = 2) -> BaseRing:
    return BaseRing(order)


@dataclass(frozen=True)
class RingElem:
    """An element c_0 + c_1 eps + ... + c_{N-1} eps^{N-1} with exact rational c_i."""

    base: BaseRing
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.base.order:
            raise ValueError("coefficient tuple length must equal the nilpotency order")

    # -- structure -------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    @property
    def is_unit(self) -> bool:
        return self.coeffs[0] != 0

    @property
    def is_nilpotent(self) -> bool:
        return self.coeffs[0] == 0

    def reduction(self) -> Fraction:
        """Image under eps -> 0."""
        return self.coeffs[0]

    def rational_value(self) -> Fraction:
        """The value as a rational; error if a nilpotent part is present."""
        if any(c != 0 for c in self.coeffs[1:]):
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    # -- arithmetic ------------------------------------------------------

    def _check(self, other: RingElem):
        if self.base != other.base:
            raise BaseMismatch(f"mixed bases {self.base} and {other.base}")

    def __add__(self, other: RingElem) -> RingElem:
        self._check(other)
        return RingElem(self.base, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: RingElem) -> RingElem:
        self._check(other)
        return RingElem(self.base, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> RingElem:
        return RingElem(self.base, tuple(-a for a in self.coeffs))

    def __mul__(self, other: RingElem) -> RingElem:
        self._check(other)
        n = self.base.order
        out = [Fraction(0)] * n
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                if i + j >= n:
                    break
                if b != 0:
                    out[i + j] += a * b
        return RingElem(self.base, tuple(out))

    def inverse(self) -> RingElem:
        """Multiplicative inverse; NotAUnit if the reduction vanishes."""
        if not self.is_unit:
            raise NotAUnit(f"{self} is not a unit (reduction is zero)")
        c0 = self.coeffs[0]
        inv0 = self.base(Fraction(1, 1) / c0)
        # x = c0 (1 + n) with n nilpotent; (1 + n)^-1 = sum_k (-n)^k is a finite sum
        n_part = (self * inv0) - self.base.one()
        acc = self.base.one()
        term = self.base.one()
        for _ in range(1, self.base.order):
            term = term * (-n_part)
            if term.is_zero:
                break
            acc = acc + term
        return acc * inv0

    def __truediv__(self, other: RingElem) -> RingElem:
        return self * other.inverse()

    def __pow__(self, n: int) -> RingElem:
        if n < 0:
            return self.inverse() ** (-n)
        out = self.base.one()
        b = self
        while n:
            if n & 1:
                out = out * b
            b = b * b
            n >>= 1
        return out

    def reduce_to(self, target: BaseRing) -> RingElem:
        """Push into a smaller nilpotency order (eps^k -> 0 for k >= target order)."""
        if target.order > self.base.order:
            raise BaseMismatch("cannot reduce into a larger ring")
        return RingElem(target, self.coeffs[: target.order])

    # -- printing --------------------------------------------------------

    def __str__(self):
        return format_ring_elem(self)

    def __repr__(self):
        return format_ring_elem(self)


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_ring_elem(x: RingElem) -> str:
    """Render in the plain-text grammar, e.g. ``1 - 2*eps`` or ``3/2*eps^2``."""
    parts: list[tuple[Fraction, int]] = [
        (c, k) for k, c in enumerate(x.coeffs) if c != 0
    ]
    if not parts:
        return "0"
    chunks = []
    for c, k in parts:
        mag = format_rational(abs(c))
        if k == 0:
            body = mag
        else:
            epspow = "eps" if k == 1 else f"eps^{k}"
            body = epspow if abs(c) == 1 else f"{mag}*{epspow}"
        if not chunks:
            chunks.append(body if c > 0 else f"-{body}")
        else:
            chunks.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(chunks)
