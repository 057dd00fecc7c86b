"""From a covariance V(x) to the coefficients of its power series distribution.

For V in normal form x*(1 + x*U(x)) the quadratures are ordinary power
series::

    s(z)   = s_lead * z * exp(-int U/(1 + zU))     (s'/s = 1/V)
    b(z)   = exp(int 1/(1 + zU))                   (b'/b = z/V)
    tau(z) = z / s(z)

and omega(y) = b(s^{-1}(y)) = sum c_k y^k. The coefficients are produced by
two independent routes: Lagrange inversion

    c_k = (1/k) [z^(k-1)] b'(z) tau(z)^k,   k >= 1,

and a triangular recurrence for t_j = [z^j] b'(z) tau(z)^(a+1) obtained by
matching coefficients in z V g' = ((a+2)V - zV' + z^2 - (a+1)z) g, which
reads

    k t_k = t_(k-1) + (a + 1 - k) * sum_{j=1..k} a_j t_(k-j),    t_0 = 1,

with c_(m+1) = t_m(m) / (m+1).

``s_lead`` is the free multiplicative constant of s (the additive constant
of the antiderivative of 1/V). It rescales y, so it multiplies c_k by
s_lead**(-k) and leaves the covariance unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import covariance as cov
from . import fps
from .covariance import CovarianceSpec, UForm
from .errors import (
    NonIntegralLinearTerm,
    NotNormalForm,
    TauVanishesAtZero,
)
from .fps import Series


@dataclass(frozen=True)
class QuadratureSeries:
    s: Series
    b: Series
    tau: Series
    order: int
    s_lead: Fraction = Fraction(1)


@dataclass(frozen=True)
class ValidityVerdict:
    analytic_proxy_ok: bool
    positivity_ok: bool
    tau0_nonzero: bool
    tau0_positive: bool
    all_c_nonneg: bool
    first_negative_index: int | None
    u_absolutely_monotone: bool | None
    checked_order: int
    sample_radius: float

    @property
    def passed(self) -> bool:
        return (
            self.analytic_proxy_ok
            and self.positivity_ok
            and self.tau0_positive
            and self.all_c_nonneg
        )


@dataclass(frozen=True)
class SynthesisResult:
    spec: CovarianceSpec
    quadratures: QuadratureSeries
    c: tuple[Fraction, ...]
    route_agreement: bool
    verdict: ValidityVerdict
    order: int
    argpow: int = 1
    base_c: tuple[Fraction, ...] = ()
    recurrence_c: tuple[Fraction, ...] = ()
    u: UForm | None = field(default=None, repr=False)

    @property
    def omega(self) -> Series:
        return Series(self.c)


def _normal_form_u(v: Series) -> Series:
    if v.order < 2 or v.coeffs[0] != 0 or v.coeffs[1] != 1:
        raise NotNormalForm("quadratures need V = x + O(x^2)")
    return (v.shift(-1) - 1).shift(-1)


def quadratures(v: Series, order: int, s_lead=1) -> QuadratureSeries:
    """s, b and tau of a normal-form V, to ``order`` coefficients each.

    ``v`` should carry ``order + 2`` coefficients; fewer shrink the result.
    """
    s_lead = Fraction(s_lead)
    if s_lead <= 0:
        raise ValueError("s_lead must be positive")
    u = _normal_form_u(v)
    n = min(order, u.order)
    u = u.truncate(n)
    h = fps.div(Series.one(n), Series.one(n) + u.shift(1).truncate(n))  # 1/(1 + zU)
    b = fps.exp(fps.integrate(h)).truncate(n)
    tau = (fps.exp(fps.integrate(fps.mul(u, h))) / s_lead).truncate(n)
    s = fps.div(Series.one(n), tau).shift(1).truncate(n)
    return QuadratureSeries(s, b, tau, n, s_lead)


def s_eval(q: QuadratureSeries, x) -> Fraction:
    """The truncated polynomial s evaluated at rational x (meaningful only well inside the disk)."""
    return q.s.evaluate(Fraction(x))


def coefficients_lagrange(q: QuadratureSeries, order: int | None = None) -> list[Fraction]:
    n = q.order if order is None else min(order, q.order)
    tau0 = q.tau.coeffs[0]
    if tau0 == 0:
        raise TauVanishesAtZero("tau(0) = 0; Lagrange inversion does not apply")
    b0 = q.b.coeffs[0]
    db = fps.differentiate(q.b)
    c = [Fraction(1)]
    if n < 2:
        return c[:n]
    tau = q.tau.truncate(n - 1)
    tau_pow = Series.one(n - 1)
    for k in range(1, n):
        tau_pow = fps.mul(tau_pow, tau)
        acc = sum((db.coeffs[i] * tau_pow.coeffs[k - 1 - i] for i in range(k)), Fraction(0))
        c.append(acc / k / b0)
    return c


def coefficients_recurrence(u: UForm, order: int, s_lead=1) -> list[Fraction]:
    """c_0..c_(order-1) from the t_k recurrence, one run per target index."""
    lam = 1 / Fraction(s_lead)
    a = list(u.u.coeffs)
    if len(a) < order - 2:
        raise ValueError(f"U needs {order - 2} coefficients, has {len(a)}")
    support = [(j, a[j - 1]) for j in range(1, len(a) + 1) if a[j - 1]]
    c = [Fraction(1)]
    for m in range(order - 1):
        t = [Fraction(1)]
        for k in range(1, m + 1):
            inner = Fraction(0)
            for j, aj in support:
                if j > k:
                    break
                inner += aj * t[k - j]
            t.append((t[k - 1] + (m + 1 - k) * inner) / k)
        c.append(t[m] / (m + 1) * lam ** (m + 1))
    return c[:order]


def validate_covariance(q: QuadratureSeries, c, spec: CovarianceSpec, u: UForm | None = None) -> ValidityVerdict:
    radius = cov.sampling_radius(spec)
    analytic = cov.analytic_radius(spec) >= radius > 0
    positive = cov.positive_on_samples(spec, radius)
    tau0 = q.tau.coeffs[0]
    first_negative = next((k for k, ck in enumerate(c) if ck < 0), None)
    return ValidityVerdict(
        analytic_proxy_ok=bool(analytic),
        positivity_ok=positive,
        tau0_nonzero=tau0 != 0,
        tau0_positive=tau0 > 0,
        all_c_nonneg=first_negative is None,
        first_negative_index=first_negative,
        u_absolutely_monotone=None if u is None else u.absolutely_monotone,
        checked_order=len(c),
        sample_radius=radius,
    )


def linear_multiplicity(v: Series) -> int:
    """The positive integer V'(0), after checking V(0) = 0."""
    if v.coeffs[0] != 0:
        raise NotNormalForm(
            f"V(0) = {v.coeffs[0]} != 0; write V as a shifted normal-form covariance"
        )
    v1 = v.coeffs[1]
    if v1 <= 0 or v1.denominator != 1:
        raise NonIntegralLinearTerm(
            f"V'(0) = {v1} is not a positive integer, so V is not the covariance of any PSD"
        )
    return int(v1)


def synthesize(spec: CovarianceSpec, order: int = fps.DEFAULT_ORDER, s_lead=1) -> SynthesisResult:
    """Run the full pipeline on ``spec`` and return c_0..c_(order-1).

    When V'(0) = n > 1 the base covariance V(n u)/n**2 is synthesized and
    omega(y) = omega_base(y**n) is returned.
    """
    if order < 2:
        raise ValueError("order must be at least 2")
    if spec.center != 0:
        raise NotNormalForm("spec is expanded away from the origin; synthesize its base and shift omega")
    v = cov.to_series(spec, order + 2)
    n = linear_multiplicity(v)
    base_order = max((order - 1) // n + 1, 2)
    v_base = v.truncate(base_order + 2).scale_argument(n) / (n * n)
    q = quadratures(v_base, base_order, s_lead)
    u = UForm(_normal_form_u(v_base))
    lagrange = coefficients_lagrange(q, base_order)
    recurrence = coefficients_recurrence(u, base_order, s_lead)
    c = [Fraction(0)] * order
    for k, ck in enumerate(lagrange):
        if k * n < order:
            c[k * n] = ck
    verdict = validate_covariance(q, c, spec, u)
    return SynthesisResult(
        spec=spec,
        quadratures=q,
        c=tuple(c),
        route_agreement=lagrange == recurrence,
        verdict=verdict,
        order=order,
        argpow=n,
        base_c=tuple(lagrange),
        recurrence_c=tuple(recurrence),
        u=u,
    )


# -- identities --------------------------------------------------------------------------


def ode_residuals(v: Series, q: QuadratureSeries) -> tuple[Series, Series]:
    """(V*s' - s, V*b' - z*b); both vanish for correct quadratures."""
    ds = fps.differentiate(q.s)
    db = fps.differentiate(q.b)
    r_s = fps.mul(v, ds) - q.s
    r_b = fps.mul(v, db) - q.b.shift(1)
    return r_s, r_b


def pde_residuals_y(c, count: int, order: int) -> list[Series]:
    """Residuals of y dP/dy - z dP/dz + x P per power z^k, in the y-parameterization.

    P = sum_k p_k(y) z^k with p_k = c_k y^k / omega(y) and x = y omega'/omega.
    """
    omega = Series(c, order)
    inv = fps.div(Series.one(order), omega)
    x = fps.mul(fps.differentiate(omega), inv.truncate(order - 1)).shift(1)
    out = []
    for k in range(count):
        p = (inv * c[k]).shift(k).truncate(order)
        y_dp = fps.differentiate(p).shift(1)
        out.append(y_dp - p * k + fps.mul(x, p))
    return out


def pde_residuals_x(v: Series, q: QuadratureSeries, c, count: int) -> list[Series]:
    """Residuals of V dP/dx - z dP/dz + x P per power z^k, as series in x.

    Uses p_k(x) = c_k s(x)^k / omega(s(x)), so the check ties c to s and V.
    """
    n = q.order
    omega = Series(c[:n], n)
    big_omega = fps.compose(omega, q.s)
    inv = fps.div(Series.one(n), big_omega)
    x = Series.variable(n)
    out = []
    s_pow = Series.one(n)
    for k in range(count):
        p = fps.mul(s_pow, inv) * c[k]
        dp = fps.differentiate(p)
        out.append(fps.mul(v, dp) - p.truncate(n - 1) * k + fps.mul(x, p).truncate(n - 1))
        s_pow = fps.mul(s_pow, q.s)
    return out


def pgf(c, x, z_order: int | None = None, tail_tolerance: float = 1e-12) -> Series:
    """P(z, x) as a series in z: p_k = c_k y^k / omega(y) with the mean of the model equal to x.

    See :func:`psdsynth.distribution.solve_parameter` for how y is found.
    """
    from .distribution import solve_parameter, partial_sum_change

    c = [Fraction(ck) for ck in c]
    y = solve_parameter(c, x)
    partial_sum_change(c, y, tail_tolerance)
    omega_y = Series(c).evaluate(y)
    n = len(c) if z_order is None else min(z_order, len(c))
    p = []
    yk = Fraction(1)
    for k in range(n):
        p.append(c[k] * yk / omega_y)
        yk *= y
    return Series(p)
