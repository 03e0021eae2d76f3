from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from x13verify import forms as F
from x13verify.cycfield import CYC13, QQ, zeta
from x13verify.polyring import (
    SparsePolynomial,
    SquareMatrix,
    elementary_symmetric,
    evaluate,
    multiply_reference,
    newton_convert,
    power_sum_poly,
    power_sums_from_elementary,
    substitute_linear,
    substitute_reference,
)

N = 3


def _poly(draw_terms, field=QQ):
    return SparsePolynomial(N, field, {tuple(e): c for e, c in draw_terms})


monomials = st.tuples(*(st.integers(0, 3) for _ in range(N)))
rational_polys = st.lists(st.tuples(monomials, st.integers(-5, 5)), max_size=6).map(_poly)
cyc_coeffs = st.lists(st.integers(-3, 3), min_size=12, max_size=12).map(CYC13.element)
cyc_polys = st.lists(st.tuples(monomials, cyc_coeffs), max_size=5).map(lambda ts: _poly(ts, CYC13))
points = st.lists(st.integers(-4, 4), min_size=N, max_size=N)
matrices = st.lists(st.lists(st.integers(-2, 2), min_size=N, max_size=N), min_size=N, max_size=N).map(
    lambda rows: SquareMatrix(QQ, rows)
)


@given(rational_polys, rational_polys, rational_polys)
def test_commutative_ring(a, b, c):
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a - a).is_zero()


@given(cyc_polys, cyc_polys)
def test_degree_additivity(a, b):
    if a.is_zero() or b.is_zero():
        assert (a * b).is_zero()
    else:
        assert (a * b).degree == a.degree + b.degree


@given(cyc_polys, cyc_polys)
def test_kernel_product_matches_reference(a, b):
    assert a * b == multiply_reference(a, b)


@given(rational_polys, matrices, points)
def test_substitution_commutes_with_evaluation(p, m, x):
    lhs = evaluate(substitute_linear(p, m), x)
    rhs = evaluate(p, m.apply(x))
    assert lhs == rhs


@settings(max_examples=30)
@given(rational_polys, matrices, matrices)
def test_substitution_is_functorial(p, m1, m2):
    # (p o M1) o M2 = p o (M1 M2)
    assert substitute_linear(substitute_linear(p, m1), m2) == substitute_linear(p, m1 @ m2)


@given(rational_polys, rational_polys, points)
def test_evaluation_is_a_homomorphism(a, b, x):
    assert evaluate(a * b, x) == evaluate(a, x) * evaluate(b, x)
    assert evaluate(a + b, x) == evaluate(a, x) + evaluate(b, x)


def test_functoriality_with_group_generators():
    s, t = F.generator_matrix("S"), F.generator_matrix("T")
    p = F.build_form("A", 2).change_field(CYC13)
    assert substitute_linear(substitute_linear(p, s), t) == substitute_linear(p, s @ t)
    assert substitute_linear(p, s @ t) == substitute_reference(p, s @ t)


def test_kernel_substitution_matches_reference():
    w = F.build_root_family("w")[3]
    m = F.generator_matrix("S")
    assert substitute_linear(w, m) == substitute_reference(w, m)


def test_pow_and_derivative():
    x = SparsePolynomial.variable(1, N)
    y = SparsePolynomial.variable(2, N)
    p = (x + y) ** 3
    assert p.coefficient((2, 1, 0)).to_fraction() == 3
    assert p.derivative(1) == ((x + y) ** 2) * 3
    assert p.is_homogeneous() and p.degree == 3


def test_zeta_coefficients():
    x = SparsePolynomial.variable(1, 1, CYC13)
    p = x * zeta(1) - zeta(1)
    assert evaluate(p, [CYC13.one]).is_zero()
    assert not p.is_rational()


def test_matrix_inverse_and_scalar():
    m = SquareMatrix(QQ, [[2, 1], [1, 1]])
    assert m @ m.inverse() == SquareMatrix.identity(2, QQ)
    assert (m * 3).scalar_multiple_of(m) == QQ(3)
    assert SquareMatrix.diag([5, 5], QQ).scalar() == QQ(5)


def test_newton_roundtrip():
    roots = [Fraction(1), Fraction(-2), Fraction(3, 2), Fraction(5)]
    ps = [sum(r**k for r in roots) for k in range(1, 5)]
    sig = newton_convert(ps)
    assert sig[0] == sum(roots)
    assert sig[3] == roots[0] * roots[1] * roots[2] * roots[3]
    assert power_sums_from_elementary(sig) == ps


def test_symmetric_polynomials():
    p2 = power_sum_poly(3, 2)
    e1, e2 = elementary_symmetric(3, 1), elementary_symmetric(3, 2)
    assert p2 == e1 * e1 - e2 * 2


def test_json_roundtrip():
    p = F.build_form("D", 4)
    assert SparsePolynomial.from_json(p.to_json(), CYC13) == p


def test_mismatched_shapes_rejected():
    with pytest.raises(ValueError):
        substitute_linear(SparsePolynomial.variable(1, 2), SquareMatrix.identity(3, QQ))
    with pytest.raises(ValueError):
        evaluate(SparsePolynomial.variable(1, 2), [1])
