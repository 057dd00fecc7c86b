"""Recursive-descent parser for covariance expressions in one variable ``x``.

Grammar::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/' | <implicit>) unary)*
    unary   := ('+' | '-') unary | power
    power   := atom (('^' | '**') exponent)?
    exponent:= ['+' | '-'] INTEGER | '(' ['+' | '-'] INTEGER ')'
    atom    := NUMBER | 'x' | '(' expr ')'

NUMBER is an integer or decimal literal and is kept exact. Values are
rational functions, returned as a reduced (numerator, denominator) pair.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from . import poly
from .errors import ParseError, ZeroDenominator

_TOKEN = re.compile(
    r"(?P<ws>[ \t\r\n]+)|(?P<num>\d+(?:\.\d*)?|\.\d+)|(?P<pow>\*\*|\^)|(?P<op>[-+*/()])|(?P<name>[A-Za-z_]\w*)"
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: int


@dataclass(frozen=True)
class RationalFunction:
    numer: poly.Poly
    denom: poly.Poly

    @classmethod
    def of(cls, numer: poly.Poly, denom: poly.Poly = poly.ONE) -> "RationalFunction":
        if not denom:
            raise ZeroDenominator("denominator is identically zero")
        g = poly.gcd(numer, denom) if numer else denom
        numer = poly.divmod_(numer, g)[0]
        denom = poly.divmod_(denom, g)[0]
        # canonical scaling: constant term of the denominator is 1 when possible
        lead = denom[0] if denom[0] else denom[-1]
        return cls(poly.scale(numer, 1 / lead), poly.scale(denom, 1 / lead))

    @property
    def is_polynomial(self) -> bool:
        return len(self.denom) == 1

    def __add__(self, o):
        return RationalFunction.of(
            poly.add(poly.mul(self.numer, o.denom), poly.mul(o.numer, self.denom)),
            poly.mul(self.denom, o.denom),
        )

    def __sub__(self, o):
        return self + (-o)

    def __neg__(self):
        return RationalFunction(poly.neg(self.numer), self.denom)

    def __mul__(self, o):
        return RationalFunction.of(poly.mul(self.numer, o.numer), poly.mul(self.denom, o.denom))

    def __truediv__(self, o):
        if not o.numer:
            raise ZeroDenominator("division by an expression that is identically zero")
        return RationalFunction.of(poly.mul(self.numer, o.denom), poly.mul(self.denom, o.numer))

    def __pow__(self, k: int):
        if k >= 0:
            return RationalFunction.of(poly.power(self.numer, k), poly.power(self.denom, k))
        if not self.numer:
            raise ZeroDenominator("zero raised to a negative power")
        return RationalFunction.of(poly.power(self.denom, -k), poly.power(self.numer, -k))


def _line_col(text: str, pos: int) -> tuple[int, int]:
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = self._tokenize(text)
        self.i = 0

    def error(self, message: str, pos: int | None = None) -> ParseError:
        if pos is None:
            pos = self.peek().pos
        return ParseError(message, *_line_col(self.text, pos))

    def _tokenize(self, text: str) -> list[Token]:
        out = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m:
                raise ParseError(f"unexpected character {text[pos]!r}", *_line_col(text, pos))
            kind = m.lastgroup
            if kind != "ws":
                out.append(Token(kind, m.group(), pos))
            pos = m.end()
        out.append(Token("end", "", len(text)))
        return out

    def peek(self) -> Token:
        return self.tokens[self.i]

    def take(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, text: str) -> Token:
        tok = self.peek()
        if tok.text != text:
            raise self.error(f"expected {text!r}, found {tok.text or 'end of input'!r}")
        return self.take()

    def parse(self) -> RationalFunction:
        if self.peek().kind == "end":
            raise self.error("empty expression")
        value = self.expr()
        if self.peek().kind != "end":
            raise self.error(f"unexpected {self.peek().text!r}")
        return value

    def expr(self) -> RationalFunction:
        value = self.term()
        while self.peek().text in ("+", "-"):
            op = self.take().text
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def _starts_factor(self, tok: Token) -> bool:
        return tok.kind in ("num", "name") or tok.text == "("

    def term(self) -> RationalFunction:
        value = self.unary()
        while True:
            tok = self.peek()
            if tok.text == "*":
                self.take()
                value = value * self.unary()
            elif tok.text == "/":
                self.take()
                rhs_pos = self.peek().pos
                rhs = self.unary()
                if not rhs.numer:
                    raise ZeroDenominator(
                        "division by zero at line {}, column {}".format(*_line_col(self.text, rhs_pos))
                    )
                value = value / rhs
            elif self._starts_factor(tok):
                value = value * self.power()
            else:
                return value

    def unary(self) -> RationalFunction:
        if self.peek().text == "-":
            self.take()
            return -self.unary()
        if self.peek().text == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> RationalFunction:
        base = self.atom()
        if self.peek().kind == "pow":
            self.take()
            k = self.exponent()
            base = base ** k
        return base

    def exponent(self) -> int:
        paren = self.peek().text == "("
        if paren:
            self.take()
        sign = 1
        if self.peek().text in ("+", "-"):
            sign = -1 if self.take().text == "-" else 1
        tok = self.peek()
        if tok.kind != "num" or not tok.text.isdigit():
            raise self.error("exponent must be an integer literal")
        self.take()
        if paren:
            self.expect(")")
        return sign * int(tok.text)

    def atom(self) -> RationalFunction:
        tok = self.peek()
        if tok.kind == "num":
            self.take()
            return RationalFunction.of(poly.const(Fraction(tok.text)))
        if tok.kind == "name":
            if tok.text != "x":
                raise self.error(f"unknown name {tok.text!r}; the only variable is x")
            self.take()
            return RationalFunction.of(poly.X)
        if tok.text == "(":
            self.take()
            value = self.expr()
            self.expect(")")
            return value
        raise self.error(f"unexpected {tok.text or 'end of input'!r}")


def parse_expression(text: str) -> RationalFunction:
    return _Parser(text).parse()
