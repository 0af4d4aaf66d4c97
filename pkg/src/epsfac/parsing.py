"""Parser for the plain-text grammar: integers, / + - * ^, symbols t and eps.

Expressions evaluate to rational functions over the chosen base ring;
series strings are the special case expanded at t = 0.  Parse errors
carry the offending position.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ParseError
from .ratfunc import Poly, RatFunc
from .rings import BaseRing
from .series import LaurentSeries


class _Tokenizer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.tokens: list[tuple[str, str, int]] = []
        self._run()
        self.index = 0

    def _run(self):
        text = self.text
        i = 0
        while i < len(text):
            ch = text[i]
            if ch.isspace():
                i += 1
                continue
            if ch.isdigit():
                j = i
                while j < len(text) and text[j].isdigit():
                    j += 1
                self.tokens.append(("int", text[i:j], i))
                i = j
                continue
            if ch.isalpha():
                j = i
                while j < len(text) and text[j].isalpha():
                    j += 1
                word = text[i:j]
                if word not in ("t", "eps"):
                    raise ParseError(f"unknown symbol '{word}'", i)
                self.tokens.append(("sym", word, i))
                i = j
                continue
            if ch in "+-*/^()":
                self.tokens.append((ch, ch, i))
                i += 1
                continue
            raise ParseError(f"unexpected character '{ch}'", i)
        self.tokens.append(("end", "", len(text)))

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.index]

    def next(self) -> tuple[str, str, int]:
        tok = self.tokens[self.index]
        self.index += 1
        return tok


class _Parser:
    def __init__(self, text: str, base: BaseRing):
        self.toks = _Tokenizer(text)
        self.base = base

    def parse(self) -> RatFunc:
        value = self._expr()
        kind, _, pos = self.toks.peek()
        if kind != "end":
            raise ParseError("trailing input", pos)
        return value

    def _expr(self) -> RatFunc:
        value = self._term()
        while True:
            kind, _, _ = self.toks.peek()
            if kind == "+":
                self.toks.next()
                value = value + self._term()
            elif kind == "-":
                self.toks.next()
                value = value - self._term()
            else:
                return value

    def _term(self) -> RatFunc:
        value = self._unary()
        while True:
            kind, _, pos = self.toks.peek()
            if kind == "*":
                self.toks.next()
                value = value * self._unary()
            elif kind == "/":
                self.toks.next()
                rhs = self._unary()
                if rhs.num.reduction().is_zero:
                    raise ParseError("division by zero", pos)
                value = value / rhs
            else:
                return value

    def _unary(self) -> RatFunc:
        kind, _, _ = self.toks.peek()
        if kind == "-":
            self.toks.next()
            return -self._unary()
        if kind == "+":
            self.toks.next()
            return self._unary()
        return self._power()

    def _power(self) -> RatFunc:
        value = self._atom()
        kind, _, _ = self.toks.peek()
        if kind == "^":
            self.toks.next()
            sign = 1
            kind, _, _ = self.toks.peek()
            if kind == "-":
                self.toks.next()
                sign = -1
            kind, text, pos = self.toks.next()
            if kind != "int":
                raise ParseError("exponent must be an integer", pos)
            return value ** (sign * int(text))
        return value

    def _atom(self) -> RatFunc:
        kind, text, pos = self.toks.next()
        if kind == "int":
            return RatFunc.const(self.base, int(text))
        if kind == "sym" and text == "t":
            return RatFunc.t(self.base)
        if kind == "sym" and text == "eps":
            if self.base.is_rationals:
                raise ParseError("eps is not available over the rationals", pos)
            return RatFunc(Poly(self.base, {0: self.base.eps()}))
        if kind == "(":
            value = self._expr()
            kind, _, pos = self.toks.next()
            if kind != ")":
                raise ParseError("expected ')'", pos)
            return value
        raise ParseError(f"unexpected token '{text or kind}'", pos)


def parse_ratfunc(text: str, base: BaseRing) -> RatFunc:
    return _Parser(text, base).parse()


def parse_series(text: str, base: BaseRing, prec: int | None = None) -> LaurentSeries:
    """Parse a series string: the expansion at t = 0 of the given expression.

    Laurent polynomials (including negative powers of t) come back exact.
    """
    return parse_ratfunc(text, base).expand_at(Fraction(0), prec)


def parse_rational(text: str) -> Fraction:
    """A bare rational number 'p' or 'p/q' (used for points and exponents)."""
    text = text.strip()
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"not a rational number: '{text}'") from exc
