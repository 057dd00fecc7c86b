"""Covariance characteristics V(x): representation, expansion and checks.

A :class:`CovarianceSpec` is a polynomial, a rational function, or a raw
truncated series. Series specs carry an integer ``center``: their
coefficients are an expansion in powers of ``(x - center)``, which is how a
covariance recovered from ``y**m * W(y)`` comes out naturally.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import fps, poly
from .errors import (
    NotNormalForm,
    NotRevertible,
    OrderExceeded,
    UnrepresentableComposition,
    ZeroDenominator,
)
from .expr import RationalFunction, parse_expression
from .fps import Series

POLYNOMIAL = "polynomial"
RATIONAL = "rational"
SERIES = "series"

# cap for the sampled positivity interval
MAX_SAMPLE_RADIUS = 8
POSITIVITY_SAMPLES = 64


@dataclass(frozen=True)
class CovarianceSpec:
    kind: str
    numer: Series
    denom: Series = field(default_factory=lambda: Series([1]))
    domain_hint: Fraction | float | None = None
    center: int = 0
    label: str | None = None

    def __post_init__(self):
        if self.kind not in (POLYNOMIAL, RATIONAL, SERIES):
            raise ValueError(f"unknown covariance kind {self.kind!r}")
        if self.kind != SERIES and self.center != 0:
            raise ValueError("polynomial and rational specs are expressed in x itself")

    @property
    def numer_poly(self) -> poly.Poly:
        return poly.trim(self.numer.coeffs)

    @property
    def denom_poly(self) -> poly.Poly:
        return poly.trim(self.denom.coeffs)

    def with_domain(self, radius) -> CovarianceSpec:
        return CovarianceSpec(self.kind, self.numer, self.denom, radius, self.center, self.label)

    def __str__(self) -> str:
        return spec_text(self)


@dataclass(frozen=True)
class UForm:
    """U in V(x) = x*(1 + x*U(x)); ``u[i]`` is the coefficient a_{i+1}."""

    u: Series
    valid: bool = True

    @property
    def absolutely_monotone(self) -> bool:
        # nonnegative coefficients up to the truncation order only
        return all(c >= 0 for c in self.u.coeffs)


def from_rational_function(rf: RationalFunction, domain_hint=None, label=None) -> CovarianceSpec:
    if rf.is_polynomial:
        numer = poly.scale(rf.numer, 1 / rf.denom[0])
        return CovarianceSpec(POLYNOMIAL, Series(numer or (0,)), Series([1]), domain_hint, 0, label)
    return CovarianceSpec(RATIONAL, Series(rf.numer or (0,)), Series(rf.denom), domain_hint, 0, label)


def from_polynomial(coeffs, domain_hint=None, label=None) -> CovarianceSpec:
    return from_rational_function(RationalFunction.of(poly.trim(coeffs)), domain_hint, label)


def from_series(series: Series, center: int = 0, domain_hint=None, label=None) -> CovarianceSpec:
    return CovarianceSpec(SERIES, series, Series([1]), domain_hint, center, label)


def parse_spec(text: str) -> CovarianceSpec:
    """Parse a covariance expression in ``x`` into a canonical spec."""
    return from_rational_function(parse_expression(text), label=text.strip())


def sqrt_example_series(order: int) -> Series:
    """Taylor coefficients of 2*(1 - sqrt(1 - x))."""
    coeffs = [Fraction(0)]
    binom = Fraction(1)  # binom(1/2, k) * (-1)^k, built incrementally
    for k in range(1, order):
        binom *= (Fraction(1, 2) - (k - 1)) / k * -1
        coeffs.append(-2 * binom)
    return Series(coeffs[:order], order)


PRESETS = {
    "sqrt-example": (sqrt_example_series, Fraction(1), "2*(1 - sqrt(1 - x))"),
}


def preset(name: str, order: int = 128) -> CovarianceSpec:
    try:
        make, radius, text = PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; available: {', '.join(sorted(PRESETS))}") from None
    return from_series(make(order), 0, radius, text)


def spec_text(spec: CovarianceSpec) -> str:
    if spec.label and spec.kind != SERIES:
        return spec.label
    if spec.kind == POLYNOMIAL:
        return fps.format_polynomial(spec.numer_poly, "x")
    if spec.kind == RATIONAL:
        return f"({fps.format_polynomial(spec.numer_poly, 'x')})/({fps.format_polynomial(spec.denom_poly, 'x')})"
    var = "x" if spec.center == 0 else f"(x - {spec.center})" if spec.center > 0 else f"(x + {-spec.center})"
    body = fps.format_polynomial(spec.numer.coeffs, "u").replace("u", var)
    prefix = f"{spec.label}: " if spec.label else ""
    return f"{prefix}{body} + O({var}^{spec.numer.order})"


def to_series(spec: CovarianceSpec, order: int) -> Series:
    """Taylor expansion of V about the spec's center to ``order`` terms."""
    if spec.denom.coeffs[0] == 0:
        raise ZeroDenominator("denominator vanishes at the expansion point")
    if spec.kind == SERIES:
        if order > spec.numer.order:
            raise OrderExceeded(f"series spec holds {spec.numer.order} terms, {order} requested")
        return spec.numer.truncate(order)
    return fps.div(Series(spec.numer.coeffs, order), Series(spec.denom.coeffs, order))


def expand_about(spec: CovarianceSpec, point: int, order: int) -> Series:
    """Expansion of V in powers of ``(x - point)``."""
    if spec.kind == SERIES:
        if point != spec.center:
            raise UnrepresentableComposition(
                f"series spec is expanded about {spec.center}; re-expansion about {point} would be inexact"
            )
        return to_series(spec, order)
    shift = (Fraction(point), Fraction(1))
    numer = poly.compose(spec.numer_poly, shift)
    denom = poly.compose(spec.denom_poly, shift)
    if not denom or denom[0] == 0:
        raise ZeroDenominator(f"V has a pole at x = {point}")
    return fps.div(Series(numer, order), Series(denom, order))


def evaluate(spec: CovarianceSpec, x) -> Fraction:
    """Exact V(x); series specs use their truncated polynomial."""
    x = Fraction(x)
    if spec.kind == SERIES:
        return spec.numer.evaluate(x - spec.center)
    den = poly.evaluate(spec.denom_poly, x)
    if den == 0:
        raise ZeroDenominator(f"V has a pole at x = {x}")
    return poly.evaluate(spec.numer_poly, x) / den


def u_form(spec: CovarianceSpec, order: int) -> UForm:
    """U with V(x) = x*(1 + x*U(x)), to ``order`` coefficients."""
    if spec.center != 0:
        raise NotNormalForm("spec is expanded away from the origin")
    v = to_series(spec, order + 2)
    if v.coeffs[0] != 0 or v.coeffs[1] != 1:
        raise NotNormalForm(f"expected V = x + O(x^2), got V(0) = {v.coeffs[0]}, V'(0) = {v.coeffs[1]}")
    return UForm((v.shift(-1) - 1).shift(-1))


def omega_structure(omega: Series) -> tuple[int, int]:
    """(m, n) such that omega = y**m * W(y**n) with W(0) != 0 and W'(0) != 0.

    ``n`` is the gcd of the exponents carried beyond the lowest one.
    """
    m = omega.valuation()
    if m is None:
        raise NotRevertible("omega vanishes to the truncation order")
    n = 0
    for i, c in enumerate(omega.coeffs[m + 1:], start=1):
        if c:
            n = math.gcd(n, i)
    if n == 0:
        raise NotRevertible("omega is a monomial to the truncation order; the variance is zero")
    return m, n


def covariance_from_omega(omega: Series, order: int | None = None) -> Series:
    """V recovered from omega, in powers of ``(x - m)`` where ``m`` is the valuation of omega.

    Computes x(y) = y*omega'/omega, reverts it to y = f(x) and returns f/f'.
    Shifts and argument powers y**m * W(y**n) are unwrapped first, giving
    n**2 * V_W((x - m)/n).
    """
    m, n = omega_structure(omega)
    w = omega.shift(-m)
    compressed = Series(w.coeffs[::n])
    if compressed.order < 3:
        raise NotRevertible("too few coefficients to recover a covariance")
    mean = fps.div(fps.differentiate(compressed), compressed.truncate(compressed.order - 1)).shift(1)
    if mean.coeffs[1] == 0:
        raise NotRevertible("x(y) has a vanishing linear term")
    f = fps.revert(mean)
    v_w = fps.div(f.truncate(f.order - 1), fps.differentiate(f))
    v = v_w.scale_argument(Fraction(1, n)) * (n * n)
    if order is not None:
        v = v.truncate(min(order, v.order))
    return v


def covariance_spec_from_omega(omega: Series, order: int | None = None) -> CovarianceSpec:
    m, _ = omega_structure(omega)
    return from_series(covariance_from_omega(omega, order), center=m)


# -- positivity and analyticity proxies -------------------------------------------------


def _positive_real_roots(p: poly.Poly) -> list[float]:
    if len(p) < 2:
        return []
    roots = np.roots([float(c) for c in reversed(p)])
    out = []
    for r in roots:
        if abs(r.imag) <= 1e-9 * max(1.0, abs(r)) and r.real > 1e-12:
            out.append(float(r.real))
    return out


def _root_moduli(p: poly.Poly) -> list[float]:
    if len(p) < 2:
        return []
    return [float(abs(r)) for r in np.roots([float(c) for c in reversed(p)])]


def series_radius_estimate(s: Series) -> float:
    """Root-test estimate of the radius of convergence from the upper half of the coefficients."""
    n = s.order
    vals = []
    for k in range(max(1, n // 2), n):
        c = s.coeffs[k]
        if c:
            vals.append(abs(float(c)) ** (-1.0 / k))
    if not vals:
        return math.inf
    return min(vals)


def analytic_radius(spec: CovarianceSpec) -> float:
    """Radius of the disk about the origin on which V is (estimated to be) analytic."""
    if spec.kind == POLYNOMIAL:
        return math.inf
    if spec.kind == RATIONAL:
        moduli = _root_moduli(spec.denom_poly)
        return min(moduli) if moduli else math.inf
    return series_radius_estimate(spec.numer)


def sampling_radius(spec: CovarianceSpec) -> float:
    """Right end R of the interval (0, R) on which positivity is sampled.

    With a domain hint, the hint. Otherwise the largest interval reaching
    from 0 that stays inside the analytic disk and stops at the first
    positive real zero or pole of V, so only a genuine sign change inside the
    claimed domain is reported.
    """
    if spec.domain_hint is not None:
        return min(float(spec.domain_hint), MAX_SAMPLE_RADIUS)
    r = min(analytic_radius(spec), MAX_SAMPLE_RADIUS)
    if spec.kind != SERIES:
        zeros = _positive_real_roots(spec.numer_poly) + _positive_real_roots(spec.denom_poly)
        if zeros:
            r = min(r, min(zeros))
    return r


def sample_points(radius: float, count: int = POSITIVITY_SAMPLES) -> list[Fraction]:
    r = Fraction(radius).limit_denominator(10**6)
    if r > radius:
        r = Fraction(math.floor(radius * 10**6), 10**6)
    return [r * i / (count + 1) for i in range(1, count + 1)]


def positive_on_samples(spec: CovarianceSpec, radius: float, count: int = POSITIVITY_SAMPLES) -> bool:
    """Heuristic: V > 0 at ``count`` equispaced rational points of (0, radius)."""
    if radius <= 0:
        return False
    for x in sample_points(radius, count):
        try:
            if evaluate(spec, x) <= 0:
                return False
        except ZeroDenominator:
            return False
    return True
