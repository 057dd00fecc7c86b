"""Truncated formal power series with exact rational coefficients.

A :class:`Series` stores the coefficients of ``z**0 .. z**(order-1)``; every
result carries the order that is actually determined by its inputs, so
nothing past the truncation point is ever invented.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Iterable, Sequence

from .errors import (
    ConstantTermNotOne,
    DivisionByNonUnit,
    NonzeroConstantTerm,
    NonzeroInnerConstant,
    NotInvertible,
    OrderExceeded,
)

Rational = Fraction

DEFAULT_ORDER = 16


def as_rational(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, _RationalABC)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot use {type(value).__name__} as an exact coefficient")


@dataclass(frozen=True, eq=True)
class Series:
    coeffs: tuple[Fraction, ...]

    def __init__(self, coeffs: Iterable = (), order: int | None = None):
        cs = [as_rational(c) for c in coeffs]
        if order is not None:
            if order < 0:
                raise ValueError("order must be non-negative")
            cs = cs[:order] + [Fraction(0)] * (order - len(cs))
        object.__setattr__(self, "coeffs", tuple(cs))

    @property
    def order(self) -> int:
        return len(self.coeffs)

    # construction helpers

    @classmethod
    def zero(cls, order: int = DEFAULT_ORDER) -> Series:
        return cls((), order)

    @classmethod
    def one(cls, order: int = DEFAULT_ORDER) -> Series:
        return cls((1,), order)

    @classmethod
    def constant(cls, value, order: int = DEFAULT_ORDER) -> Series:
        return cls((value,), order)

    @classmethod
    def variable(cls, order: int = DEFAULT_ORDER) -> Series:
        return cls((0, 1), order)

    @classmethod
    def monomial(cls, power: int, order: int = DEFAULT_ORDER, coefficient=1) -> Series:
        return cls([0] * power + [coefficient], order)

    # access

    def __getitem__(self, k: int) -> Fraction:
        return coefficient_of(self, k)

    def __iter__(self):
        return iter(self.coeffs)

    def __len__(self) -> int:
        return len(self.coeffs)

    def truncate(self, order: int) -> Series:
        if order > self.order:
            raise OrderExceeded(f"cannot extend a series of order {self.order} to {order}")
        return Series(self.coeffs[:order])

    def valuation(self) -> int | None:
        """Index of the first nonzero coefficient, or None if all vanish."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return None

    def is_zero(self) -> bool:
        return self.valuation() is None

    def shift(self, m: int) -> Series:
        """Multiply by ``z**m``; a negative ``m`` divides, dropping zero terms."""
        if m >= 0:
            return Series((Fraction(0),) * m + self.coeffs)
        head = self.coeffs[:-m]
        if any(head):
            raise NotInvertible(f"series is not divisible by z^{-m}")
        return Series(self.coeffs[-m:])

    def scale_argument(self, factor) -> Series:
        """Return f(factor*z)."""
        factor = as_rational(factor)
        p = Fraction(1)
        out = []
        for c in self.coeffs:
            out.append(c * p)
            p *= factor
        return Series(out)

    def evaluate(self, x) -> Fraction:
        """Exact value of the truncated polynomial at rational ``x``."""
        x = as_rational(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def to_floats(self) -> list[float]:
        return [float(c) for c in self.coeffs]

    # arithmetic

    def __add__(self, other):
        if isinstance(other, Series):
            return add(self, other)
        return add(self, Series.constant(as_rational(other), self.order))

    __radd__ = __add__

    def __neg__(self) -> Series:
        return Series(-c for c in self.coeffs)

    def __sub__(self, other):
        if isinstance(other, Series):
            return add(self, -other)
        return add(self, Series.constant(-as_rational(other), self.order))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Series):
            return mul(self, other)
        k = as_rational(other)
        return Series(c * k for c in self.coeffs)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Series):
            return div(self, other)
        k = as_rational(other)
        if k == 0:
            raise ZeroDivisionError("division of a series by zero")
        return Series(c / k for c in self.coeffs)

    def __rtruediv__(self, other):
        return div(Series.constant(as_rational(other), self.order), self)

    def __pow__(self, k: int) -> Series:
        return power(self, k)

    def __call__(self, inner: Series) -> Series:
        return compose(self, inner)

    def __repr__(self) -> str:
        return f"Series({[str(c) for c in self.coeffs]})"

    def __str__(self) -> str:
        return format_series(self)


def format_series(a: Series, var: str = "z") -> str:
    return f"{format_polynomial(a.coeffs, var)} + O({var}^{a.order})"


def format_polynomial(coeffs: Sequence[Fraction], var: str = "x") -> str:
    out = ""
    for i, c in enumerate(coeffs):
        if not c:
            continue
        mag = abs(c)
        if i == 0:
            term = str(mag)
        else:
            mono = var if i == 1 else f"{var}^{i}"
            term = mono if mag == 1 else f"{mag}*{mono}"
        if not out:
            out = term if c > 0 else f"-{term}"
        else:
            out += f" + {term}" if c > 0 else f" - {term}"
    return out or "0"


def _int_vector(cs: Sequence[Fraction]) -> tuple[list[int], int]:
    den = math.lcm(*(c.denominator for c in cs)) if cs else 1
    return [c.numerator * (den // c.denominator) for c in cs], den


def add(a: Series, b: Series) -> Series:
    n = min(a.order, b.order)
    return Series(a.coeffs[i] + b.coeffs[i] for i in range(n))


def mul(a: Series, b: Series) -> Series:
    n = min(a.order, b.order)
    if n == 0:
        return Series()
    # convolve over a common denominator: integer products are far cheaper
    # than Fraction products, and exactness is kept by one reduction per term
    xa, da = _int_vector(a.coeffs[:n])
    xb, db = _int_vector(b.coeffs[:n])
    nza = [(i, v) for i, v in enumerate(xa) if v]
    out = [0] * n
    for i, v in nza:
        for j in range(n - i):
            w = xb[j]
            if w:
                out[i + j] += v * w
    den = da * db
    return Series(Fraction(v, den) for v in out)


def div(a: Series, b: Series) -> Series:
    n = min(a.order, b.order)
    if n == 0:
        return Series()
    b0 = b.coeffs[0]
    if b0 == 0:
        raise DivisionByNonUnit("divisor has zero constant term")
    bs = b.coeffs
    q: list[Fraction] = []
    for k in range(n):
        acc = a.coeffs[k]
        for j in range(1, k + 1):
            if bs[j]:
                acc -= bs[j] * q[k - j]
        q.append(acc / b0)
    return Series(q)


def power(a: Series, k: int) -> Series:
    if k < 0:
        return div(Series.one(a.order), power(a, -k))
    result = Series.one(a.order)
    base = a
    while k:
        if k & 1:
            result = mul(result, base)
        k >>= 1
        if k:
            base = mul(base, base)
    return result


def differentiate(a: Series) -> Series:
    return Series(i * a.coeffs[i] for i in range(1, a.order))


def integrate(a: Series) -> Series:
    """Antiderivative with zero constant term."""
    return Series([Fraction(0)] + [c / (i + 1) for i, c in enumerate(a.coeffs)])


def exp(a: Series) -> Series:
    n = a.order
    if n == 0:
        return Series()
    if a.coeffs[0] != 0:
        raise NonzeroConstantTerm("exp needs a series with zero constant term")
    ka = [i * c for i, c in enumerate(a.coeffs)]
    e = [Fraction(1)]
    for m in range(1, n):
        acc = Fraction(0)
        for k in range(1, m + 1):
            if ka[k]:
                acc += ka[k] * e[m - k]
        e.append(acc / m)
    return Series(e)


def log(a: Series) -> Series:
    if a.order == 0:
        return Series()
    if a.coeffs[0] != 1:
        raise ConstantTermNotOne("log needs a series with constant term 1")
    if a.order == 1:
        return Series([0])
    return integrate(div(differentiate(a), a.truncate(a.order - 1)))


def compose(f: Series, g: Series) -> Series:
    """f(g(z)) by Horner's scheme; ``g`` must vanish at 0."""
    if g.order and g.coeffs[0] != 0:
        raise NonzeroInnerConstant("inner series must have zero constant term")
    v = g.valuation()
    if f.order == 0:
        return Series()
    if v is None:
        return Series.constant(f.coeffs[0], g.order)
    n = min(g.order, v * f.order)
    if n == 0:
        return Series()
    g = g.truncate(n)
    # terms of f at index >= ceil(n / v) only touch z^n and beyond
    last = min(f.order, -(-n // v)) - 1
    acc = Series.constant(f.coeffs[last], n)
    for i in range(last - 1, -1, -1):
        acc = mul(acc, g)
        acc = Series((acc.coeffs[0] + f.coeffs[i],) + acc.coeffs[1:])
    return acc


def revert(f: Series) -> Series:
    """Compositional inverse g with f(g(z)) = z = g(f(z)), via Newton iteration."""
    n = f.order
    if n < 2 or f.coeffs[0] != 0 or f.coeffs[1] == 0:
        raise NotInvertible("reversion needs f(0) = 0 and f'(0) != 0")
    g = Series.monomial(1, 2, 1 / f.coeffs[1])
    p = 2
    while p < n:
        p = min(2 * p, n)
        gp = Series(g.coeffs, p)
        fp = f.truncate(p)
        residual = compose(fp, gp) - Series.variable(p)
        slope = compose(differentiate(fp), gp.truncate(p - 1))
        # residual = O(z^2) at least, so dividing residual/z first keeps order p
        step = div(residual.shift(-1), slope).shift(1)
        g = gp - step
    return g if g.order == n else g.truncate(n)


def coefficient_of(f: Series, k: int) -> Fraction:
    if k < 0 or k >= f.order:
        raise OrderExceeded(f"coefficient {k} requested from a series of order {f.order}")
    return f.coeffs[k]


def agrees(a: Series, b: Series, upto: int | None = None) -> bool:
    """True iff ``a`` and ``b`` coincide on their common truncation order."""
    n = min(a.order, b.order)
    if upto is not None:
        if upto > n:
            return False
        n = upto
    return a.coeffs[:n] == b.coeffs[:n]
