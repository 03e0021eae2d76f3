import cmath
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from x13verify.cycfield import (
    CYC13,
    QQ,
    QSQRT_M7,
    FieldMismatchError,
    FieldSpec,
    SignResolutionError,
    alpha_beta_gamma,
    format_element,
    r_constant_candidates,
    r_constants,
    resolve_r_constants,
    sqrt13_constant,
    theta_periods,
    zeta,
)

small = st.integers(-20, 20)
cyc_elements = st.builds(
    lambda nums, d: CYC13.element([Fraction(n, d) for n in nums]),
    st.lists(small, min_size=12, max_size=12),
    st.integers(1, 6),
)
nonzero = cyc_elements.filter(lambda a: not a.is_zero())


@given(cyc_elements, cyc_elements, cyc_elements)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == CYC13.zero
    assert a * CYC13.one == a


@settings(max_examples=40)
@given(nonzero)
def test_inverse(a):
    assert a * a.inverse() == CYC13.one
    assert (CYC13.one / a) * a == CYC13.one


@given(cyc_elements, cyc_elements)
def test_embedding_is_a_homomorphism(a, b):
    assert abs((a * b).embed() - a.embed() * b.embed()) < 1e-6 * (1 + abs(a.embed() * b.embed()))
    assert abs((a + b).embed() - a.embed() - b.embed()) < 1e-9 * (1 + abs(a.embed()) + abs(b.embed()))


def test_zeta_has_order_13():
    assert zeta(1) ** 13 == CYC13.one
    assert zeta(1) ** 12 == zeta(12)
    assert sum((zeta(k) for k in range(13)), CYC13.zero).is_zero()
    assert abs(zeta(1).embed() - cmath.exp(2j * cmath.pi / 13)) < 1e-15


def test_normalisation_to_lowest_terms():
    a = CYC13.element([Fraction(2, 4)] + [0] * 11)
    assert a.den == 2 and a.num[0] == 1
    assert CYC13.element([Fraction(3, 3)] + [0] * 11) == CYC13.one


def test_gauss_sum_squares_to_13():
    s = sqrt13_constant()
    assert s * s == CYC13(13)
    assert abs(s.embed() - 13**0.5) < 1e-12
    assert [int(c) for c in s.coords] == [-1, 0, -2, 0, 0, -2, -2, -2, -2, 0, 0, -2]


def test_theta_period_embedding():
    t1 = theta_periods()[0]
    assert abs(t1.embed() - complex(0.6513878188659971, 0.5224158034564078)) < 1e-12


def test_periods_sum_to_minus_one():
    assert sum(theta_periods(), CYC13.zero) == CYC13(-1)


def test_alpha_beta_gamma_relations():
    a, b, c = alpha_beta_gamma()
    for x in (a, b, c):
        assert x.is_rational() is False
    assert (a * a + b * b + c * c).is_rational()


def test_r_constants_principal_signs():
    rc = r_constants()
    assert [int(c) for c in rc.r2.coords] == [1, 2, 1, 2, 0, 1, 1, 1, 1, 2, 0, 1]
    assert [int(c) for c in rc.r4.coords] == [0, 0, 1, 0, 0, 1, 1, -1, -1, 0, 0, -1]
    assert abs(rc.r0.embed() - (-8.262869916706425j)) < 1e-9
    assert abs(rc.rinf.embed() - (-10.036183574426484j)) < 1e-9
    s13 = sqrt13_constant()
    assert rc.r2 * rc.r2 == (3 * s13 - 13) * Fraction(1, 2)
    assert rc.r4 * rc.r4 == (-3 * s13 - 13) * Fraction(1, 2)


def test_r_candidates_are_principal_first():
    _, r2s, r4s = r_constant_candidates()
    assert r2s[0] == -r2s[1] and r4s[0] == -r4s[1]
    assert r2s[0].embed().imag > 0 and r4s[0].embed().imag > 0


def test_sign_resolution_rejects_ambiguity():
    with pytest.raises(SignResolutionError):
        resolve_r_constants(lambda rc: True)
    with pytest.raises(SignResolutionError):
        resolve_r_constants(lambda rc: False)


def test_field_mismatch():
    with pytest.raises(FieldMismatchError):
        _ = zeta(1) + QSQRT_M7.gen


def test_quadratic_field():
    g = QSQRT_M7.gen
    assert g * g == QSQRT_M7(-7)
    assert abs(g.embed() - 1j * 7**0.5) < 1e-12


def test_bad_modulus_rejected():
    with pytest.raises(ValueError):
        FieldSpec("bad", (1, 2), 0j)
    with pytest.raises(ValueError):
        FieldSpec("bad", (1, 0, 1), 2 + 0j)


def test_rational_roundtrip():
    assert QQ(Fraction(3, 7)).to_fraction() == Fraction(3, 7)
    assert CYC13(5).is_rational()
    x = zeta(3) * Fraction(2, 5) - 1
    assert type(x).from_json(CYC13, x.to_json()) == x
    assert "z" in format_element(x)
