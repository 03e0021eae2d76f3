"""One test per acceptance criterion, each recording a single pass/fail line."""

import subprocess
import sys
import time

import pytest

from x13verify import forms as F
from x13verify import verify as V
from x13verify.cycfield import CYC13
from x13verify.polyring import SparsePolynomial


def _timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def test_ac01_group_relations(report_line):
    res, dt = _timed(V.check_group_relations)
    scalars = res.details["scalars"]
    ok = res.passed and scalars["T^13"] == "1" and all(v is not None for v in scalars.values()) and dt < 5
    report_line(1, "group relations (scalars recorded)", ok, f"S^2={scalars['S^2']} (ST)^3={scalars['(ST)^3']} H^6={scalars['H^6']} {dt:.2f}s")
    assert ok, res.details


def test_ac02_transformation_laws(report_line):
    t0 = time.perf_counter()
    results = [V.check_A_transform(), V.check_D_transform(), V.check_G_transform()]
    dt = time.perf_counter() - t0
    tried = results[1].details.get("sign_pairs_tried", {})
    unique = sum(tried.values()) == 1
    ok = all(r.passed for r in results) and unique and dt < 60
    report_line(2, "A-, D- and G-transformation laws for all nu", ok, f"{dt:.1f}s")
    assert ok, [r.details for r in results]


def test_ac03_delta_sum(report_line):
    def run():
        total = SparsePolynomial.zero(6, CYC13)
        for d in F.build_root_family("delta"):
            total = total + d
        return total

    total, dt = _timed(run)
    ok = total.is_zero() and dt < 10
    report_line(3, "sum of the delta family is zero", ok, f"{dt:.2f}s")
    assert ok


def test_ac04_g_table_consistency(report_line):
    res = V.check_G_tables()
    ok = res.passed and res.details["differing_indices"] == [6]
    report_line(4, "sextic tables agree except the G6 defect", ok, str(res.details["differences"]))
    assert ok, res.details


def test_ac05_modular_identification_order_30(report_line):
    res, dt = _timed(lambda: V.check_modular_identification(30))
    counts = [c["integer_coefficients_compared"] for c in res.details["comparisons"].values()]
    ok = res.passed and min(counts) >= 30 and dt < 300
    report_line(5, "theta invariants identified with modular forms through q^30", ok, f"min coefficients {min(counts)}, {dt:.1f}s")
    assert ok, res.details


def test_ac06_e8_equation(report_line):
    res = V.check_e8_equation(30)
    ok = res.passed
    report_line(6, "E8 relation, generator identity and Phi12*Phi18 = Phi30 on series", ok)
    assert ok, res.details


def test_ac07_invariance(report_line):
    results = [V.check_invariance(l, "schwartz_zippel", seed=42, points=20) for l in V.SZ_LABELS]
    results += [V.check_invariance(l, "symbolic") for l in ("4", "8")]
    control = results[0].details["controls"][0]
    ok = all(r.passed for r in results) and control["observed"] == "fail"
    report_line(7, "invariance under S and T (20 points each) plus symbolic Phi4, Phi8", ok)
    assert ok, [r.details for r in results if not r.passed]


def test_ac08_icosahedral(report_line):
    res = V.check_icosahedral(30)
    ok = res.passed
    report_line(8, "icosahedral relation, determinant cross-checks, level-5 series", ok,
                f"Jacobian/T = {res.details['determinant_factors']['Jacobian(f, H) / T']['observed']}")
    assert ok, res.details


def test_ac09_numeric_transformations(report_line):
    res = V.check_numeric_transforms()
    worst = max(max(r["translation"], r["inversion"]) for r in res.details["samples"].values())
    ok = res.passed and worst < 1e-9 and res.details["wrong_branch_min_residual"] > 1e-9
    report_line(9, "numeric theta transformation laws at 5 points", ok, f"max residual {worst:.1e}")
    assert ok, res.details


def test_ac10_sections(report_line):
    res = V.check_sections()
    ok = res.passed and res.details["pencil"]["ratio"] == "-676/413" and res.details["bridge"] == "4056/1315"
    report_line(10, "Bring, Fricke and pencil reductions with the 4056/1315 bridge", ok)
    assert ok, res.details


def test_ac11_quintic_nodes(report_line):
    res = V.check_quintic_nodes()
    ok = res.passed and not res.details["generic_point"]["singular"]
    report_line(11, "quintic surface singular points (iii)-(vi)", ok)
    assert ok, res.details


def test_ac12_field_layer(report_line):
    res = V.check_field_constants()
    ok = res.passed
    report_line(12, "theta periods, Gauss sum and r-constant radicands", ok)
    assert ok, res.details


@pytest.mark.slow
def test_ac13_full_suite_cli(report_line):
    t0 = time.perf_counter()
    proc = subprocess.run(
        [sys.executable, "-m", "x13verify", "verify", "--suite", "all", "--order", "30", "--seed", "42", "--format", "json"],
        capture_output=True,
        text=True,
    )
    dt = time.perf_counter() - t0
    ok = proc.returncode == 0 and dt < 600
    report_line(13, "full CLI suite exits 0", ok, f"{dt:.1f}s")
    assert ok, proc.stdout[-2000:] + proc.stderr[-2000:]
