"""Dense exact polynomials over Q, stored as tuples of Fractions (lowest degree first).

Only what the covariance parser and the transform group need: ring
operations, composition, Euclidean gcd and evaluation.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Poly = tuple[Fraction, ...]

ZERO: Poly = ()
ONE: Poly = (Fraction(1),)
X: Poly = (Fraction(0), Fraction(1))


def trim(p: Sequence) -> Poly:
    cs = [Fraction(c) for c in p]
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


def degree(p: Poly) -> int:
    return len(p) - 1


def const(c) -> Poly:
    return trim((c,))


def add(p: Poly, q: Poly) -> Poly:
    n = max(len(p), len(q))
    return trim(
        (p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)
    )


def neg(p: Poly) -> Poly:
    return tuple(-c for c in p)


def sub(p: Poly, q: Poly) -> Poly:
    return add(p, neg(q))


def scale(p: Poly, k) -> Poly:
    return trim(c * k for c in p)


def mul(p: Poly, q: Poly) -> Poly:
    if not p or not q:
        return ZERO
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return trim(out)


def power(p: Poly, k: int) -> Poly:
    if k < 0:
        raise ValueError("negative polynomial power")
    out = ONE
    for _ in range(k):
        out = mul(out, p)
    return out


def compose(p: Poly, q: Poly) -> Poly:
    """p(q(x)) exactly."""
    out = ZERO
    for c in reversed(p):
        out = add(mul(out, q), const(c))
    return out


def evaluate(p: Poly, x) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def divmod_(p: Poly, q: Poly) -> tuple[Poly, Poly]:
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(p)
    quo = [Fraction(0)] * max(len(p) - len(q) + 1, 0)
    lead = q[-1]
    for shift in range(len(p) - len(q), -1, -1):
        c = rem[shift + len(q) - 1] / lead
        quo[shift] = c
        if c:
            for j, b in enumerate(q):
                rem[shift + j] -= c * b
    return trim(quo), trim(rem[: len(q) - 1])


def monic(p: Poly) -> Poly:
    return scale(p, 1 / p[-1]) if p else p


def gcd(p: Poly, q: Poly) -> Poly:
    while q:
        p, q = q, divmod_(p, q)[1]
    return monic(p)


def valuation(p: Poly) -> int:
    for i, c in enumerate(p):
        if c:
            return i
    raise ValueError("zero polynomial has no valuation")
