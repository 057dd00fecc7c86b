import math
from fractions import Fraction as F

import pytest

from psdsynth import covariance as cov
from psdsynth import fps, synthesis
from psdsynth.errors import DomainError, NonIntegralLinearTerm, NotNormalForm, TauVanishesAtZero
from psdsynth.fixtures import closed_form_coefficients, load_all
from psdsynth.fps import Series

EX5 = "x*(1+2*x)*(1+3*x)*(1+4*x)"
EX6 = "x*(1+x/2)*(1+x)^2"


def direct_omega(q: synthesis.QuadratureSeries) -> list[F]:
    """omega = b(s^-1(y)) by explicit reversion and composition, normalized to c_0 = 1."""
    omega = fps.compose(q.b, fps.revert(q.s))
    return [c / omega.coeffs[0] for c in omega.coeffs]


def v_series(text, order):
    return cov.to_series(cov.parse_spec(text), order)


# -- quadratures --------------------------------------------------------------------


def test_quadratures_poisson():
    q = synthesis.quadratures(v_series("x", 10), 8)
    assert q.s == Series.variable(8)
    assert q.b == fps.exp(Series.variable(8))
    assert q.tau == Series.one(8)


def test_quadratures_geometric():
    q = synthesis.quadratures(v_series("x+x^2", 10), 8)
    # s = z/(1+z), b = 1+z, tau = 1+z
    assert q.s == Series([0] + [(-1) ** (k - 1) for k in range(1, 8)])
    assert q.b == Series([1, 1], 8)
    assert q.tau == Series([1, 1], 8)


def test_quadratures_bernoulli():
    q = synthesis.quadratures(v_series("x-x^2", 10), 8)
    assert q.s == Series([0] + [1] * 7)
    assert q.b == Series([1] * 8)
    assert q.tau == Series([1, -1], 8)
    assert synthesis.coefficients_lagrange(q) == [1, 1] + [0] * 6


def test_quadratures_need_normal_form():
    with pytest.raises(NotNormalForm):
        synthesis.quadratures(v_series("2*x", 6), 4)


@pytest.mark.parametrize("text", ["x", "x*(1+x)", EX5, EX6, "x/(1-x)", "x*(1+x^3)"])
def test_ode_identities(text):
    v = v_series(text, 14)
    q = synthesis.quadratures(v, 12)
    r_s, r_b = synthesis.ode_residuals(v, q)
    assert r_s.is_zero()
    assert r_b.is_zero()


# -- coefficient routes -----------------------------------------------------------------


def test_lagrange_poisson():
    q = synthesis.quadratures(v_series("x", 12), 10)
    assert synthesis.coefficients_lagrange(q) == [F(1, math.factorial(k)) for k in range(10)]


def test_stated_example_5_against_direct_composition():
    # Independent route: revert s and compose with b.
    q = synthesis.quadratures(v_series(EX5, 10), 8)
    assert synthesis.coefficients_lagrange(q) == direct_omega(q)
    assert synthesis.coefficients_lagrange(q) == [1, 1, 5, 36, 306, 2861, 28457, 295616]


def test_printed_example_5_table_comes_from_extra_factor():
    q = synthesis.quadratures(v_series(EX5 + "*(1+6*x)", 10), 8)
    assert synthesis.coefficients_lagrange(q) == [1, 1, 8, 96, 1379, 21937, 372724, 6631164]


def test_example_6_with_leading_constant():
    q = synthesis.quadratures(v_series(EX6, 9), 7, s_lead=F(1, 2))
    assert synthesis.coefficients_lagrange(q) == [1, 2, 7, F(92, 3), F(455, 3), F(4046, 5), F(204631, 45)]
    assert synthesis.coefficients_lagrange(q) == direct_omega(q)


def test_s_lead_rescales_coefficients():
    v = v_series(EX6, 12)
    c1 = synthesis.coefficients_lagrange(synthesis.quadratures(v, 10))
    c2 = synthesis.coefficients_lagrange(synthesis.quadratures(v, 10, s_lead=F(1, 2)))
    assert c2 == [ck * 2**k for k, ck in enumerate(c1)]


def test_tau_vanishing_is_rejected():
    q = synthesis.QuadratureSeries(Series([0, 1]), Series([1, 1]), Series([0, 1]), 2)
    with pytest.raises(TauVanishesAtZero):
        synthesis.coefficients_lagrange(q)


def test_recurrence_closed_forms():
    poisson = cov.u_form(cov.parse_spec("x"), 10)
    assert synthesis.coefficients_recurrence(poisson, 10) == closed_form_coefficients("poisson", 10)
    geometric = cov.u_form(cov.parse_spec("x*(1+x)"), 10)
    assert synthesis.coefficients_recurrence(geometric, 10) == [1] * 10


def test_recurrence_example_5():
    u = cov.u_form(cov.parse_spec(EX5), 8)
    assert u.u.coeffs[:3] == (9, 26, 24)
    assert synthesis.coefficients_recurrence(u, 8) == [1, 1, 5, 36, 306, 2861, 28457, 295616]


@pytest.mark.parametrize("fx", [f for f in load_all() if f.valid], ids=lambda f: f.name)
def test_routes_agree_on_fixtures(fx):
    res = synthesis.synthesize(fx.spec, 14, fx.s_lead)
    assert res.route_agreement
    assert list(res.recurrence_c) == list(res.base_c)


@pytest.mark.parametrize("alpha", [2, 3, 4])
def test_fuss_catalan(alpha):
    res = synthesis.synthesize(cov.parse_spec(f"x*(1+{alpha - 1}*x)*(1+{alpha}*x)"), 12)
    assert list(res.c) == [F(math.comb(alpha * k + 1, k), alpha * k + 1) for k in range(12)]


# -- validity verdict ---------------------------------------------------------------------


def test_verdict_bernoulli():
    res = synthesis.synthesize(cov.parse_spec("x*(1-x)"), 10)
    assert res.verdict.passed
    assert list(res.c) == [1, 1] + [0] * 8


def test_verdict_negative_control():
    res = synthesis.synthesize(cov.parse_spec("2*x*(1-x)"), 10)
    v = res.verdict
    assert not v.passed
    assert not v.all_c_nonneg
    assert v.first_negative_index == 4
    assert list(res.c[:6]) == [1, 0, 1, 0, F(-1, 2), 0]


def test_verdict_example_7():
    res = synthesis.synthesize(cov.parse_spec("x*(1+x^3)"), 8)
    assert res.verdict.passed
    assert list(res.c[2:5]) == [F(1, 2), F(1, 6), F(1, 8)]


def test_non_integral_linear_term():
    with pytest.raises(NonIntegralLinearTerm):
        synthesis.synthesize(cov.parse_spec("x/2"), 6)
    with pytest.raises(NotNormalForm):
        synthesis.synthesize(cov.parse_spec("1+x"), 6)


# -- identities in (y, z) and (x, z) -------------------------------------------------------------


@pytest.mark.parametrize("text", ["x", "x*(1+x)", "x*(1-x)", EX5, "x/(1-x)"])
def test_pde_identity(text):
    res = synthesis.synthesize(cov.parse_spec(text), 12)
    assert all(r.is_zero() for r in synthesis.pde_residuals_y(res.c, 12, 12))
    v = v_series(text, 14)
    assert all(r.is_zero() for r in synthesis.pde_residuals_x(v, res.quadratures, res.c, 12))


def test_pde_x_detects_wrong_table():
    res = synthesis.synthesize(cov.parse_spec(EX5), 10)
    bad = list(res.c)
    bad[3] += 1
    v = v_series(EX5, 12)
    assert not all(r.is_zero() for r in synthesis.pde_residuals_x(v, res.quadratures, bad, 8))


# -- generating function --------------------------------------------------------------------------


def test_pgf_bernoulli():
    res = synthesis.synthesize(cov.parse_spec("x*(1-x)"), 8)
    p = synthesis.pgf(res.c, F(1, 2))
    assert p == Series([F(1, 2), F(1, 2)], 8)


def test_pgf_poisson():
    res = synthesis.synthesize(cov.parse_spec("x"), 32)
    p = synthesis.pgf(res.c, 1, z_order=8)
    for k, pk in enumerate(p.to_floats()):
        assert pk == pytest.approx(math.exp(-1) / math.factorial(k), rel=1e-12)


def test_pgf_geometric():
    res = synthesis.synthesize(cov.parse_spec("x*(1+x)"), 64)
    p = synthesis.pgf(res.c, 1, z_order=10)
    # 1/(2 - z) = sum z^k / 2^(k+1)
    for k, pk in enumerate(p.to_floats()):
        assert pk == pytest.approx(2.0 ** -(k + 1), rel=1e-12)


def test_pgf_outside_domain():
    res = synthesis.synthesize(cov.parse_spec("x*(1+x)"), 16)
    with pytest.raises(DomainError):
        synthesis.pgf(res.c, 1)
