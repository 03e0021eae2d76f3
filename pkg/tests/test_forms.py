from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from x13verify import forms as F
from x13verify.cycfield import CYC13, QQ, zeta
from x13verify.polyring import SparsePolynomial, SquareMatrix, evaluate, substitute_linear

int_points = st.lists(st.integers(-50, 50), min_size=6, max_size=6).filter(any)


def test_parse_polynomial():
    p = F.parse_polynomial("z1^2 - 3*z2*z6 + 1/2*z4")
    assert p.coefficient((2, 0, 0, 0, 0, 0)) == QQ(1)
    assert p.coefficient((0, 1, 0, 0, 0, 1)) == QQ(-3)
    assert p.coefficient((0, 0, 0, 1, 0, 0)) == QQ(Fraction(1, 2))


def test_form_catalog_shapes():
    assert all(F.build_form("A", j).degree == 2 for j in range(7))
    assert all(F.build_form("D", j).degree == 3 for j in list(range(13)) + ["inf"])
    assert all(F.build_form("G", j).degree == 6 for j in range(13))
    assert len(F.build_root_family("w")) == 14
    assert len(F.build_root_family("delta")) == 14


def test_unknown_forms_raise():
    with pytest.raises(F.FormIndexError):
        F.build_form("A", 7)
    with pytest.raises(F.FormIndexError):
        F.build_form("X", 0)
    with pytest.raises(F.FormIndexError):
        F.generator_matrix("U")
    with pytest.raises(F.FormIndexError):
        F.normalize_label("Phi13")


def test_generator_scalars():
    s, t, h = (F.generator_matrix(n) for n in "STH")
    ident = SquareMatrix.identity(6, CYC13)
    assert (s**2).scalar_multiple_of(ident) == CYC13(-1)
    assert t**13 == ident
    assert ((s @ t) ** 3).scalar_multiple_of(ident) == CYC13(-1)
    assert (h**6).scalar_multiple_of(ident) == CYC13(-1)
    assert (h.inverse() @ t @ h).scalar_multiple_of(t**4) == CYC13(1)
    assert F.h_word_scalar() == CYC13(-1)


def test_t_is_diagonal_with_fixed_exponents():
    t = F.generator_matrix("T")
    assert t.is_diagonal()
    assert [t[i, i] for i in range(6)] == [zeta(k) for k in (7, 11, 8, 6, 2, 5)]


def test_g_table_defect_is_localised():
    diff = F.g_table_diff()
    assert list(diff["diffs"]) == [6]
    entry = diff["diffs"][6]
    assert entry["only_primary"] == ["-2*D12*D7"]
    assert entry["only_restated"] == ["-2*D12*?7"]
    assert len(diff["defects"]) == 1 and diff["defects"][0]["form"] == "G6"


def test_delta_family_sums_to_zero():
    total = SparsePolynomial.zero(6, CYC13)
    for d in F.build_root_family("delta"):
        total = total + d
    assert total.is_zero()


def test_phi4_is_nonzero_polynomial():
    p4 = F.invariant_poly("4").expand()
    assert not p4.is_zero() and p4.is_rational() and p4.degree == 4


def test_budget_guard():
    with pytest.raises(F.BudgetExceededError):
        F.invariant_poly("18").expand()


@pytest.mark.parametrize(
    "text,label", [("Phi12'", "12'"), ("12p", "12'"), ("phi_12", "phi12"), ("Phi30", "30"), (8, "8")]
)
def test_normalize_label(text, label):
    assert F.normalize_label(text) == label


def test_invariant_constants():
    consts = {k: v.parts[0][0] for k, v in F.INVARIANTS.items()}
    assert consts["12"] == Fraction(-1, 676)
    assert consts["12'"] == Fraction(-1, 390)
    assert consts["18"] == Fraction(1, 78)
    assert consts["20"] == Fraction(1, 325)
    assert consts["30"] == Fraction(-1, 17095)
    assert [F.INVARIANTS[k].degree for k in ("4", "8", "12", "12'", "16", "18", "20", "30")] == [4, 8, 12, 12, 16, 18, 20, 30]


@settings(max_examples=15, deadline=None)
@given(int_points)
def test_family_evaluator_matches_generic_evaluation(x):
    ev = F.FamilyEvaluator(x)
    for kind in ("w", "delta"):
        fam = F.build_root_family(kind)
        vals = ev.family_values(kind)
        for nu in (0, 5, 13):
            assert vals[nu] == evaluate(fam[nu], x)
    assert ev.invariant(F.INVARIANTS["4"]) == evaluate(F.invariant_poly("4").expand(), x)


@settings(max_examples=10, deadline=None)
@given(int_points, st.sampled_from(["4", "8", "12", "18"]), st.sampled_from(["S", "T"]))
def test_invariants_fixed_by_generators(x, label, gen):
    inv = F.INVARIANTS[label]
    y = F.generator_matrix(gen).apply(x)
    assert inv.evaluate(y) == inv.evaluate(x)


@settings(max_examples=10, deadline=None)
@given(int_points)
def test_w_family_permuted_by_t(x):
    # T fixes w_inf and permutes w_0..w_12
    t = F.generator_matrix("T")
    a = F.FamilyEvaluator(x).family_values("w")
    b = F.FamilyEvaluator(t.apply(x)).family_values("w")
    assert a[13] == b[13]
    assert sorted(map(repr, a[:13])) == sorted(map(repr, b[:13]))


def test_icosahedral_determinants():
    f, h, t = F.icosahedral_forms()
    assert F.hessian(f) == h * 121
    assert F.jacobian(f, h) == t * 20


def test_classical_varieties():
    bring = F.classical_varieties("bring")
    assert [p.degree for p in bring] == [1, 2, 3]
    assert [p.degree for p in F.classical_varieties("fricke")] == [1, 2, 4]
    s1, q = F.classical_varieties("quintic_pencil", 1, Fraction(-676, 413))
    assert s1.degree == 1 and q.degree == 5
    with pytest.raises(F.FormIndexError):
        F.classical_varieties("quintic_pencil")


def test_d_transform_selects_principal_signs():
    from x13verify.cycfield import r_constants

    rc = r_constants()
    assert F.d_transform_holds(rc)
    flipped = rc._replace(r2=-rc.r2)
    assert not F.d_transform_holds(flipped)


def test_s_substitution_of_a0_is_combination():
    # A_0 o S lies in the span of A_0..A_6
    a0s = substitute_linear(F.build_form("A", 0).change_field(CYC13), F.generator_matrix("S"))
    span = {e for j in range(7) for e in F.build_form("A", j).terms}
    assert set(a0s.terms) <= span
