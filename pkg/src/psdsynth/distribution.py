"""Power series distributions built from omega coefficients, and their oracles.

The pmf is normalized by the truncated sum of omega; the mass lost beyond
the truncation is estimated separately (``tail_bound``) and gates every
oracle that relies on it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.optimize import brentq

from . import covariance as cov
from .covariance import CovarianceSpec
from .errors import DomainError, OrderExceeded, PsdError, TailTooHeavy
from .fps import Series

DEFAULT_TAIL_TOLERANCE = 1e-9
PARTIAL_SUM_TOLERANCE = 1e-12


@dataclass(frozen=True)
class PsdModel:
    """p_k = a_k y^k / omega(y) over the retained coefficients.

    ``complete`` declares that omega has no terms beyond ``a`` (a polynomial
    omega such as the Bernoulli 1 + y), so there is no tail to estimate.
    """

    a: tuple[Fraction, ...]
    y: Fraction
    complete: bool = False

    def __init__(self, a: Sequence, y, complete: bool = False):
        a = tuple(Fraction(v) for v in a)
        if any(v < 0 for v in a):
            raise ValueError("omega coefficients must be non-negative")
        if not any(a):
            raise ValueError("omega needs at least one positive coefficient")
        y = Fraction(y)
        if y < 0:
            raise ValueError("the parameter y must be non-negative")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "complete", bool(complete))

    @property
    def order(self) -> int:
        return len(self.a)

    @property
    def omega(self) -> Series:
        return Series(self.a)

    def omega_value(self) -> Fraction:
        return self.omega.evaluate(self.y)

    def masses(self) -> list[Fraction]:
        total = self.omega_value()
        out = []
        yk = Fraction(1)
        for ak in self.a:
            out.append(ak * yk / total)
            yk *= self.y
        return out


@dataclass(frozen=True)
class MomentReport:
    mean: Fraction
    variance: Fraction
    x_value: Fraction
    v_of_x: Fraction | None
    tail_bound: float
    order: int

    @property
    def mean_float(self) -> float:
        return float(self.mean)

    @property
    def variance_float(self) -> float:
        return float(self.variance)

    @property
    def tolerance(self) -> float:
        return variance_tolerance(self.tail_bound, self.order)

    @property
    def agrees(self) -> bool | None:
        if self.v_of_x is None:
            return None
        return abs(float(self.variance - self.v_of_x)) <= self.tolerance


@dataclass(frozen=True)
class CurvePoint:
    x: Fraction
    report: MomentReport | None
    error: str | None = None


def variance_tolerance(tail_bound: float, order: int) -> float:
    """Allowed |variance - V(x)|: the lost mass sits beyond index ``order``, so it
    can move the second moment by roughly order**2 times that mass."""
    return DEFAULT_TAIL_TOLERANCE + 4.0 * order * order * tail_bound


def pmf(model: PsdModel, k: int) -> Fraction:
    if k < 0 or k >= model.order:
        raise OrderExceeded(f"pmf index {k} outside the truncation order {model.order}")
    return model.a[k] * model.y**k / model.omega_value()


def tail_bound(model: PsdModel) -> float:
    """Estimated probability mass beyond the truncation order.

    Zero for a complete model. Otherwise a heuristic: if the last nonzero
    coefficient sits in the first half of the retained range, omega is
    treated as a polynomial (no tail); else the last two nonzero terms are
    extrapolated as a geometric tail.
    """
    if model.complete:
        return 0.0
    terms = [float(m) for m in model.masses()]
    nonzero = [k for k, t in enumerate(terms) if t > 0]
    if not nonzero:
        return math.inf
    last = nonzero[-1]
    if last < model.order // 2:
        return 0.0
    if len(nonzero) < 2:
        return math.inf
    prev = nonzero[-2]
    ratio = terms[last] / terms[prev]
    if ratio >= 1:
        return math.inf
    return terms[last] * ratio / (1 - ratio)


def _derivative_values(model: PsdModel) -> tuple[Fraction, Fraction, Fraction]:
    y = model.y
    w0 = w1 = w2 = Fraction(0)
    yk = Fraction(1)
    for k, ak in enumerate(model.a):
        t = ak * yk
        w0 += t
        w1 += k * t
        w2 += k * (k - 1) * t
        yk *= y
    # returned as omega, y*omega', y^2*omega''
    return w0, w1, w2


def moments(model: PsdModel, spec: CovarianceSpec | None = None, tolerance: float = DEFAULT_TAIL_TOLERANCE) -> MomentReport:
    """Mean and variance of the truncated model via the omega-derivative formulas."""
    tb = tail_bound(model)
    if tb > tolerance:
        raise TailTooHeavy(tb, tolerance)
    w0, w1, w2 = _derivative_values(model)
    mean = w1 / w0
    variance = w2 / w0 + mean - mean * mean
    v = cov.evaluate(spec, mean) if spec is not None else None
    return MomentReport(mean, variance, mean, v, tb, model.order)


def central_moment(model: PsdModel, r: int) -> Fraction:
    masses = model.masses()
    mean = sum((k * p for k, p in enumerate(masses)), Fraction(0))
    return sum(((k - mean) ** r * p for k, p in enumerate(masses)), Fraction(0))


def sample(model: PsdModel, count: int, seed: int, tolerance: float = DEFAULT_TAIL_TOLERANCE) -> np.ndarray:
    """``count`` iid draws by inverse CDF on the truncated pmf, from PCG64(seed)."""
    tb = tail_bound(model)
    if tb >= tolerance:
        raise TailTooHeavy(tb, tolerance)
    probs = np.array([float(p) for p in model.masses()])
    cdf = np.cumsum(probs)
    rng = np.random.Generator(np.random.PCG64(seed))
    u = rng.random(count) * cdf[-1]
    return np.searchsorted(cdf, u, side="right").astype(np.int64)


def _mean_gap(c_float: np.ndarray, x: float):
    k = np.arange(len(c_float), dtype=float)
    weights = (k - x) * c_float

    def gap(y: float) -> float:
        # sum (k - x) c_k y^k has the sign of mean(y) - x
        return float(np.polynomial.polynomial.polyval(y, weights))

    return gap


def solve_parameter(c: Sequence, x) -> Fraction:
    """The y >= 0 at which the truncated model sum c_k y^k has mean exactly ``x``.

    The mean y*omega'/omega increases with y, so the root is unique. A root
    that is a simple rational is returned exactly; otherwise the float root
    is returned as the exact dyadic rational it represents.
    """
    c = [Fraction(v) for v in c]
    x = Fraction(x)
    if any(v < 0 for v in c):
        raise DomainError("omega has negative coefficients; no distribution exists")
    if x < 0:
        raise DomainError("the mean of a PSD is non-negative")
    if c[0] == 0:
        raise DomainError("omega(0) = 0; shift omega before solving for the parameter")
    if x == 0:
        return Fraction(0)
    top = max(k for k, v in enumerate(c) if v)
    if x >= top:
        raise DomainError(f"mean {x} is not attained by a truncated omega of degree {top}")
    gap = _mean_gap(np.array([float(v) for v in c]), float(x))
    hi = 1.0
    while not gap(hi) > 0:
        hi *= 2
        if hi > 1e6 or not math.isfinite(gap(hi)):
            raise DomainError(f"no parameter y found for mean {x}")
    y_float = brentq(gap, 0.0, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)
    exact_gap = lambda y: sum(((k - x) * ck * y**k for k, ck in enumerate(c)), Fraction(0))
    for limit in (10**3, 10**6, 10**9):
        cand = Fraction(y_float).limit_denominator(limit)
        if cand > 0 and exact_gap(cand) == 0:
            return cand
    return Fraction(y_float)


def partial_sum_change(c: Sequence, y, tolerance: float = PARTIAL_SUM_TOLERANCE) -> float:
    """Change of the partial sums of omega(y) over the last four retained terms.

    Raises DomainError when it is not below ``tolerance`` or omega(y) <= 0.
    """
    terms = [float(Fraction(ck) * Fraction(y) ** k) for k, ck in enumerate(c)]
    total = sum(terms)
    if not total > 0:
        raise DomainError(f"omega(y) = {total} is not positive")
    change = abs(sum(terms[-4:]))
    if not change < tolerance:
        raise DomainError(
            f"partial sums of omega still move by {change:.3e} over the last four terms at y = {float(y):.6g}"
        )
    return change


def model_at_mean(c: Sequence, x, tail_tolerance: float = PARTIAL_SUM_TOLERANCE) -> PsdModel:
    y = solve_parameter(c, x)
    partial_sum_change(c, y, tail_tolerance)
    return PsdModel(c, y)


def variance_curve(c: Sequence, xs: Sequence, spec: CovarianceSpec | None = None, tolerance: float = DEFAULT_TAIL_TOLERANCE) -> list[CurvePoint]:
    """Moments of the family at each mean in ``xs``; failures are recorded per point."""
    out = []
    for x in xs:
        x = Fraction(x)
        try:
            report = moments(model_at_mean(c, x), spec, tolerance)
        except PsdError as exc:
            out.append(CurvePoint(x, None, str(exc)))
            continue
        out.append(CurvePoint(x, report))
    return out


def monte_carlo_variance(model: PsdModel, count: int, seed: int) -> tuple[float, float]:
    """(sample variance, its standard error) from ``count`` seeded draws.

    The standard error is the exact one of the unbiased sample variance,
    sqrt((mu4 - (n-3)/(n-1) * sigma^4) / n), from the model's central moments.
    """
    draws = sample(model, count, seed)
    var = float(np.var(draws, ddof=1))
    mu2 = central_moment(model, 2)
    mu4 = central_moment(model, 4)
    n = count
    se = math.sqrt(max(float(mu4 - Fraction(n - 3, n - 1) * mu2 * mu2), 0.0) / n)
    return var, se
