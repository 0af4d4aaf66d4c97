"""Truncated Laurent series over an exact base ring.

A series stores finitely many coefficients indexed by integer exponents,
together with a precision bound ``prec``: coefficients at exponents >= prec
are unknown.  ``prec is None`` means the series is exact (all unstated
coefficients are genuinely zero).  Arithmetic propagates precision
pessimistically; an operation that would have to invent unknown
coefficients raises InsufficientPrecision instead of truncating silently.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import (
    BaseMismatch,
    Indeterminate,
    InsufficientPrecision,
    NotAUnit,
)
from .rings import QQ, BaseRing, RingElem, format_rational

#: default working precision for operations (series_invert etc.) on exact input
DEFAULT_PREC = 24


class LaurentSeries:
    """Immutable truncated Laurent series with coefficients in a BaseRing."""

    __slots__ = ("base", "coeffs", "prec")

    def __init__(self, base: BaseRing, coeffs=None, prec: int | None = None):
        self.base = base
        clean: dict[int, RingElem] = {}
        if coeffs:
            for e, c in coeffs.items() if isinstance(coeffs, dict) else coeffs:
                c = base(c) if not isinstance(c, RingElem) else c
                if c.base != base:
                    raise BaseMismatch("coefficient from a different base ring")
                if not c.is_zero and (prec is None or e < prec):
                    clean[e] = clean.get(e, base.zero()) + c
        self.coeffs = {e: c for e, c in clean.items() if not c.is_zero}
        self.prec = prec

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(base: BaseRing, prec: int | None = None) -> LaurentSeries:
        return LaurentSeries(base, {}, prec)

    @staticmethod
    def one(base: BaseRing) -> LaurentSeries:
        return LaurentSeries(base, {0: base.one()})

    @staticmethod
    def monomial(base: BaseRing, exponent: int, coeff=1) -> LaurentSeries:
        return LaurentSeries(base, {exponent: base(coeff)})

    # -- views -------------------------------------------------------------

    def coefficient(self, e: int) -> RingElem:
        """Coefficient at exponent e; error if beyond precision."""
        if self.prec is not None and e >= self.prec:
            raise InsufficientPrecision(f"coefficient at t^{e} unknown (precision {self.prec})")
        return self.coeffs.get(e, self.base.zero())

    @property
    def is_exact(self) -> bool:
        return self.prec is None

    def is_zero(self) -> bool:
        """Zero as far as the precision can see."""
        return not self.coeffs

    def support(self) -> list[int]:
        return sorted(self.coeffs)

    def min_exp(self) -> int | None:
        """Least stored exponent, or None for a (known-)zero series."""
        return min(self.coeffs) if self.coeffs else None

    def _known_min(self) -> int | None:
        # least exponent at which this series could be nonzero
        if self.coeffs:
            return min(self.coeffs)
        return self.prec  # could be nonzero from prec on; None => exactly 0

    def reduction(self) -> LaurentSeries:
        """The series over Q obtained by eps -> 0."""
        return LaurentSeries(
            QQ, {e: QQ(c.reduction()) for e, c in self.coeffs.items()}, self.prec
        )

    def reduce_to(self, target: BaseRing) -> LaurentSeries:
        return LaurentSeries(
            target, {e: c.reduce_to(target) for e, c in self.coeffs.items()}, self.prec
        )

    def lift_to(self, target: BaseRing) -> LaurentSeries:
        """Re-read rational coefficients inside a larger base ring."""
        return LaurentSeries(
            target,
            {e: target(c.rational_value()) for e, c in self.coeffs.items()},
            self.prec,
        )

    # -- precision management ----------------------------------------------

    def truncate(self, prec: int | None) -> LaurentSeries:
        if prec is None:
            if self.prec is not None:
                raise InsufficientPrecision("cannot promote a truncated series to exact")
            return self
        new_prec = prec if self.prec is None else min(prec, self.prec)
        return LaurentSeries(self.base, self.coeffs, new_prec)

    # -- ring operations -----------------------------------------------------

    def _check(self, other: LaurentSeries):
        if self.base != other.base:
            raise BaseMismatch("mixed base rings")

    def __add__(self, other: LaurentSeries) -> LaurentSeries:
        self._check(other)
        prec = _min_prec(self.prec, other.prec)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, self.base.zero()) + c
        return LaurentSeries(self.base, out, prec)

    def __neg__(self) -> LaurentSeries:
        return LaurentSeries(self.base, {e: -c for e, c in self.coeffs.items()}, self.prec)

    def __sub__(self, other: LaurentSeries) -> LaurentSeries:
        return self + (-other)

    def __mul__(self, other: LaurentSeries) -> LaurentSeries:
        self._check(other)
        prec = _mul_prec(self, other)
        out: dict[int, RingElem] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = e1 + e2
                if prec is not None and e >= prec:
                    continue
                p = c1 * c2
                if not p.is_zero:
                    out[e] = out.get(e, self.base.zero()) + p
        return LaurentSeries(self.base, out, prec)

    def scale(self, c) -> LaurentSeries:
        c = self.base(c) if not isinstance(c, RingElem) else c
        return LaurentSeries(
            self.base, {e: c * v for e, v in self.coeffs.items()}, self.prec
        )

    def shift(self, k: int) -> LaurentSeries:
        """Multiply by t^k."""
        return LaurentSeries(
            self.base,
            {e + k: c for e, c in self.coeffs.items()},
            None if self.prec is None else self.prec + k,
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return (
            self.base == other.base
            and self.prec == other.prec
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.base, self.prec, tuple(sorted(self.coeffs.items()))))

    # -- the operations of the calculus ------------------------------------

    def valuation(self) -> int:
        """Least exponent whose coefficient is a unit modulo nilpotents.

        Computed on the reduction; Indeterminate if that vanishes to the
        available precision.
        """
        candidates = [e for e, c in self.coeffs.items() if c.is_unit]
        if candidates:
            return min(candidates)
        if self.prec is None:
            raise Indeterminate("valuation of a series with zero reduction")
        raise Indeterminate(
            f"reduction vanishes to precision O(t^{self.prec}); valuation indeterminate"
        )

    def derivative(self) -> LaurentSeries:
        """d/dt, term by term; precision drops by one."""
        out = {}
        for e, c in self.coeffs.items():
            if e != 0:
                out[e - 1] = c * self.base(e)
        return LaurentSeries(
            self.base, out, None if self.prec is None else self.prec - 1
        )

    def residue(self) -> RingElem:
        """Coefficient of t^-1."""
        return self.coefficient(-1)

    def invert(self, prec: int | None = None) -> LaurentSeries:
        """Multiplicative inverse g with self*g = 1 to the tracked precision.

        The reduction must be nonzero within precision (NotAUnit otherwise).
        ``prec`` requests an absolute precision for the result; by default a
        truncated input yields precision prec(f) - 2*val(f), and an exact
        input yields DEFAULT_PREC (or stays exact if f is a scaled monomial).
        """
        try:
            v = self.valuation()
        except Indeterminate:
            raise NotAUnit("cannot invert: reduction is zero to available precision")
        f = self.shift(-v)
        c0 = f.coefficient(0)
        # separate the constant term: f = t^v * c0 * (1 + x)
        x = f.scale(c0.inverse()) - LaurentSeries.one(self.base)
        if x.is_zero() and self.prec is None:
            out = LaurentSeries(self.base, {-v: c0.inverse()}, None)
            return out if prec is None else out.truncate(prec)
        if self.prec is None and prec is None and x.reduction().is_zero():
            # purely nilpotent deviation from a monomial: the geometric
            # series terminates, so the inverse is exact
            acc = LaurentSeries.one(self.base)
            term = LaurentSeries.one(self.base)
            for _ in range(1, self.base.order):
                term = term * (-x)
                if term.is_zero():
                    break
                acc = acc + term
            return acc.scale(c0.inverse()).shift(-v)
        if prec is not None:
            p_out = prec
        elif self.prec is not None:
            p_out = self.prec - 2 * v
        else:
            p_out = DEFAULT_PREC - v
        target = p_out + v  # precision needed for (1+x)^-1
        acc = LaurentSeries.one(self.base).truncate(target)
        term = LaurentSeries.one(self.base).truncate(target)
        neg_x = (-x).truncate(target)
        xmin = neg_x._known_min()
        cap = (target - min(0, xmin if xmin is not None else 0) + 2) * self.base.order + 4
        for _ in range(cap):
            term = (term * neg_x).truncate(target)
            if term.is_zero():
                break
            acc = acc + term
        else:
            raise InsufficientPrecision("inverse did not stabilize within the window")
        return acc.scale(c0.inverse()).shift(-v)

    def __pow__(self, n: int) -> LaurentSeries:
        if n < 0:
            return self.invert() ** (-n)
        out = LaurentSeries.one(self.base)
        b = self
        while n:
            if n & 1:
                out = out * b
            b = b * b
            n >>= 1
        return out

    def middle_unit(self) -> RingElem:
        """The constant of the three-way splitting f = u_minus * (c t^v) * u_plus.

        Here v is the valuation of the reduction, u_plus is 1 + (positive
        exponents), and u_minus is 1 + (negative exponents, nilpotent
        coefficients).  The splitting exists exactly because the group of
        units decomposes as a direct product; c is multiplicative in f.
        """
        v = self.valuation()
        h = self.shift(-v)
        lead = h.coefficient(0)
        # split h = h_plus * (1 + x) with h_plus the integral part
        h_plus = LaurentSeries(
            self.base, {e: c for e, c in h.coeffs.items() if e >= 0}, h.prec
        )
        neg = LaurentSeries(
            self.base, {e: c for e, c in h.coeffs.items() if e < 0}, None
        )
        if neg.is_zero():
            return lead
        # x = neg / h_plus has nilpotent coefficients; log(1+x) is a finite sum
        depth = -neg.min_exp()
        # needed window of h_plus^-1: exponents up to (order-1)*depth
        window = (self.base.order - 1) * depth + 1
        hp_inv = h_plus.invert(prec=window)
        x = (neg * hp_inv).truncate(window)
        if not all(c.is_nilpotent for c in x.coeffs.values()):
            raise InsufficientPrecision("non-nilpotent tail below the valuation")
        log_x = LaurentSeries.zero(self.base)
        term = LaurentSeries.one(self.base)
        for k in range(1, self.base.order):
            term = (term * x).truncate(window)
            if term.is_zero():
                break
            log_x = log_x + term.scale(Fraction((-1) ** (k + 1), k))
        z0 = log_x.coefficient(0)
        # c = lead * exp(z0); exp of a nilpotent is a finite sum
        expz = self.base.one()
        t = self.base.one()
        for k in range(1, self.base.order):
            t = t * z0 * self.base(Fraction(1, k))
            if t.is_zero:
                break
            expz = expz + t
        return lead * expz

    # -- printing ------------------------------------------------------------

    def __str__(self):
        return format_series(self)

    def __repr__(self):
        return format_series(self)


def _min_prec(p1: int | None, p2: int | None) -> int | None:
    if p1 is None:
        return p2
    if p2 is None:
        return p1
    return min(p1, p2)


def _mul_prec(f: LaurentSeries, g: LaurentSeries) -> int | None:
    # the product is known below min(prec_f + minexp_g, prec_g + minexp_f)
    cands = []
    if f.prec is not None:
        mg = g._known_min()
        if mg is None:  # g exactly zero: product exactly zero
            return None
        cands.append(f.prec + mg)
    if g.prec is not None:
        mf = f._known_min()
        if mf is None:
            return None
        cands.append(g.prec + mf)
    return min(cands) if cands else None


# -- spec-level wrappers ------------------------------------------------------


def series_invert(f: LaurentSeries, prec: int | None = None) -> LaurentSeries:
    return f.invert(prec)


def series_valuation(f: LaurentSeries) -> int:
    return f.valuation()


def series_derivative(f: LaurentSeries) -> LaurentSeries:
    return f.derivative()


def series_residue(f: LaurentSeries) -> RingElem:
    return f.residue()


def ring_det(matrix: list[list[RingElem]]) -> RingElem:
    """Exact determinant of a square matrix over a BaseRing.

    Fraction-free expansion for tiny sizes, elimination with unit pivots
    (falling back to nilpotent-safe column combination) otherwise.
    """
    n = len(matrix)
    if n == 0:
        raise ValueError("empty matrix")
    base = matrix[0][0].base
    for row in matrix:
        if len(row) != n:
            raise ValueError("matrix is not square")
        for x in row:
            if x.base != base:
                raise BaseMismatch("mixed bases in matrix")
    if n == 1:
        return matrix[0][0]
    if n == 2:
        return matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0]
    # Gaussian elimination with unit pivots; defer rows with no unit entry.
    m = [row[:] for row in matrix]
    det = base.one()
    for col in range(n):
        piv = None
        for r in range(col, n):
            if m[r][col].is_unit:
                piv = r
                break
        if piv is None:
            # all entries in this column (from col on) nilpotent: expand Laplace
            return _det_laplace(m, base)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det = det * m[col][col]
        inv = m[col][col].inverse()
        for r in range(col + 1, n):
            factor = m[r][col] * inv
            if factor.is_zero:
                continue
            m[r] = [a - factor * b for a, b in zip(m[r], m[col])]
    return det


def _det_laplace(m, base: BaseRing) -> RingElem:
    n = len(m)
    if n == 1:
        return m[0][0]
    total = base.zero()
    for j in range(n):
        if m[0][j].is_zero:
            continue
        minor = [[m[r][c] for c in range(n) if c != j] for r in range(1, n)]
        term = m[0][j] * _det_laplace(minor, base)
        total = total + (term if j % 2 == 0 else -term)
    return total


# -- text form -----------------------------------------------------------------


def format_series(f: LaurentSeries) -> str:
    """Render in the plain-text grammar with ascending exponents.

    Each stored coefficient is expanded into eps-power terms so that the
    output round-trips bit-exactly through the parser.
    """
    terms: list[tuple[int, int, Fraction]] = []  # (exponent, eps power, rational)
    for e in sorted(f.coeffs):
        c = f.coeffs[e]
        for k, q in enumerate(c.coeffs):
            if q != 0:
                terms.append((e, k, q))
    chunks = []
    for e, k, q in terms:
        factors = []
        aq = abs(q)
        if k == 0 and e == 0:
            factors.append(format_rational(aq))
        else:
            if aq != 1:
                factors.append(format_rational(aq))
            if k > 0:
                factors.append("eps" if k == 1 else f"eps^{k}")
            if e != 0:
                factors.append("t" if e == 1 else f"t^{e}")
            if not factors:
                factors.append("1")
        body = "*".join(factors)
        if not chunks:
            chunks.append(body if q > 0 else f"-{body}")
        else:
            chunks.append(f"+ {body}" if q > 0 else f"- {body}")
    if not chunks:
        out = "0"
    else:
        out = " ".join(chunks)
    if f.prec is not None:
        out += f" + O(t^{f.prec})"
    return out
