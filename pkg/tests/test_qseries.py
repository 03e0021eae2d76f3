from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from x13verify import forms as F
from x13verify import qseries as Q
from x13verify.cycfield import CYC13, QQ, zeta

CTX = Q.SeriesContext.level13(8)
CTX5 = Q.SeriesContext.level5(8)


def _int_coeffs(s, upto):
    return [int(s.coefficient(n * s.ctx.den).to_fraction()) for n in range(upto)]


def test_ramanujan_tau():
    d = Q.delta(CTX)
    assert d.valuation_q == 1
    assert [int(d.coefficient(n * 312).to_fraction()) for n in range(1, 5)] == [1, -24, 252, -1472]


def test_eisenstein():
    assert _int_coeffs(Q.eisenstein(4, CTX), 3) == [1, 240, 2160]
    assert _int_coeffs(Q.eisenstein(6, CTX), 3) == [1, -504, -16632]
    e4, e6, d = Q.eisenstein(4, CTX), Q.eisenstein(6, CTX), Q.delta(CTX)
    assert (e4**3 - e6**2).agrees_with(d * 1728)[0]


def test_eta_power_consistency():
    assert Q.eta_power(24, CTX).agrees_with(Q.eta(CTX) ** 24)[0]
    assert Q.eta_power(8, CTX).valuation_q == Fraction(1, 3)


def test_theta_leading_terms():
    vals = [Q.theta13(i, CTX).valuation_q for i in range(1, 7)]
    assert vals == [Fraction(k * k, 104) for k in Q.THETA13_K]
    assert Q.theta13(4, CTX).leading_coefficient() == QQ(-1)
    assert Q.format_leading(Q.theta13(1, CTX) * 3).startswith("q^{121/104}(3")


def test_theta6_expansion():
    s = Q.theta13(6, CTX)
    assert s.terms()[:2] == [(3, QQ(1)), (1875, QQ(-1))]


def test_series_arithmetic_and_precision():
    a, b = Q.theta13(1, CTX), Q.theta13(2, CTX)
    p = a * b
    assert p.prec == min(a.prec + b.valuation, b.prec + a.valuation)
    assert (a + b) - b == a
    assert (a * 2).coefficient(a.valuation) == QQ(2)


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 6), st.integers(1, 6), st.integers(0, 3))
def test_product_commutes_and_powers(i, j, k):
    a, b = Q.theta13(i, CTX), Q.theta13(j, CTX)
    assert a * b == b * a
    assert a ** (k + 1) == a**k * a


def test_mismatched_denominator():
    with pytest.raises(Q.SeriesMismatchError):
        Q.theta13(1, Q.SeriesContext(120, 8))
    with pytest.raises(ValueError):
        Q.theta13(7, CTX)


@pytest.mark.parametrize("i", range(1, 7))
def test_exact_matches_numeric(i):
    z = 0.8j
    s = Q.theta13(i, Q.SeriesContext.level13(10))
    assert abs(s.evaluate_numeric(z) - Q.numeric_theta(i, z)) < 1e-12


def test_numeric_theta_at_10i():
    import math

    want = math.exp(-2 * math.pi * 10 / 104)  # leading term q^{1/104}
    assert abs(Q.numeric_theta(6, 10j) - want) < 1e-20 + 1e-10 * want


def test_numeric_eta():
    z = 1.3j
    assert abs(Q.eta(Q.SeriesContext.level13(10)).evaluate_numeric(z) - Q.numeric_eta(z)) < 1e-12
    with pytest.raises(ValueError):
        Q.numeric_eta(-1j)


def test_delta_family_sums_to_zero_on_series():
    a = [Q.theta13(i, CTX) for i in range(1, 7)]
    ev = Q.SeriesEvaluator(a)
    vals = [ev.substitute(d) for d in F.build_root_family("delta")]
    total = vals[0]
    for v in vals[1:]:
        total = total + v
    assert total.is_zero()


def test_cyclotomic_coefficients():
    a = Q.theta13(1, CTX).change_field(CYC13)
    s = a.scale(zeta(3))
    assert not s.is_rational()
    assert s.scale(zeta(10)).is_rational()


def test_level5_constants():
    a, b = Q.theta5("a", CTX5), Q.theta5("b", CTX5)
    assert a.valuation_q == Fraction(9, 40) and b.valuation_q == Fraction(1, 40)
    f, h, t = F.icosahedral_forms()
    x = Q.theta_point5(CTX5)
    fx = Q.substitute_series(f, x)
    ok, _ = fx.agrees_with(-Q.delta(CTX5))
    assert ok


def test_agrees_with_reports_first_mismatch():
    a = Q.theta13(1, CTX)
    b = a + Q.PuiseuxSeries.monomial(CTX, 2 * 312, 1)
    ok, where = a.agrees_with(b)
    assert not ok and where == 2 * 312
