import json
from fractions import Fraction

import pytest

from x13verify import forms as F
from x13verify import verify as V
from x13verify.polyring import poly_pow


def _strip_elapsed(report):
    data = report.to_json()
    for r in data["results"]:
        r.pop("elapsed_ms")
    return data


def test_runs_are_deterministic():
    cfg = {"suite": "invariance", "order": 5, "seed": 11}
    a, b = V.run_suite(cfg), V.run_suite(cfg)
    assert _strip_elapsed(a) == _strip_elapsed(b)
    assert all(r.seed == 11 for r in a.results if r.method == "schwartz_zippel")


def test_different_seeds_give_different_points():
    assert V.random_points(1) != V.random_points(2)
    assert V.random_points(1) == V.random_points(1)


@pytest.mark.parametrize("suite", [s for s in V.SUITES if s not in ("all", "series", "invariance")])
def test_each_suite_passes(suite):
    report = V.run_suite({"suite": suite, "order": 5})
    assert report.results and report.passed


def test_series_suite_at_low_order():
    report = V.run_suite({"suite": "series", "order": 4})
    assert report.passed, [r.details for r in report.results if not r.passed]


def test_suite_config_validation():
    with pytest.raises(ValueError):
        V.SuiteConfig(suite="nope")
    with pytest.raises(V.InsufficientOrderError):
        V.SuiteConfig(order=2)


def test_insufficient_order_is_an_error_result():
    res = V.check_modular_identification(2)
    assert res.status == "error" and "InsufficientOrderError" in res.details["error"]


def test_group_relation_scalars_recorded():
    scalars = V.check_group_relations().details["scalars"]
    assert scalars["S^2"] == "-1"
    assert scalars["(ST)^3"] == "-1"
    assert scalars["H^6"] == "-1"
    assert scalars["T^13"] == "1"


def test_leading_terms_of_theta_invariants():
    data = V.theta_series_data(4)
    lead = {k: (s.valuation_q, s.leading_coefficient().to_fraction()) for k, s in data["raw"].items()}
    assert lead["sum_d2"] == (1, -676) and lead["sum_w3"] == (1, -390)
    assert lead["sum_d3"] == (1, 78) and lead["sum_w5"] == (Fraction(4, 3), 325)
    assert lead["sum_d5"] == (2, -17095)


def test_invariance_controls_fail_as_expected():
    res = V.check_invariance("4", "schwartz_zippel", seed=3, points=4)
    assert res.passed
    assert all(c["observed"] == "fail" for c in res.details["controls"])


def test_budget_error_surfaces_as_error_status():
    res = V.check_invariance("30", "symbolic")
    assert res.status == "error" and "BudgetExceededError" in res.details["error"]


def test_numeric_wrong_branch_is_detected():
    res = V.check_numeric_transforms()
    assert res.passed and res.details["wrong_branch_min_residual"] > 1e-3


def test_bridge_and_pencil():
    d = V.check_sections().details
    assert d["bridge"] == "4056/1315"
    assert d["pencil"]["ratio"] == "-676/413"


def test_quintic_generic_point_is_smooth():
    d = V.check_quintic_nodes().details
    assert not d["generic_point"]["singular"]


def test_report_json_roundtrip():
    report = V.run_suite({"suite": "field"})
    data = json.loads(report.dumps())
    assert data["suite"] == "field" and data["results"][0]["status"] == "pass"


@pytest.mark.slow
def test_delta0_fifth_power_has_degree_30():
    d0 = F.build_root_family("delta")[0]
    p = poly_pow(d0, 5)
    assert p.degree == 30 and p.is_homogeneous()
