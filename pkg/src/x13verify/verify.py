"""Named identity checks and the suites that run them.

Each check returns a CheckResult.  A check passes only if every assertion in
it held *and* its built-in negative controls (deliberately perturbed versions
of the identity) failed; a control that unexpectedly holds fails the check,
which guards against vacuous passes.
"""

from __future__ import annotations

import cmath
import functools
import json
import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from . import forms as F
from . import qseries as Q
from .cycfield import (
    CYC13,
    QQ,
    QSQRT_M7,
    FieldElement,
    RConstants,
    SignResolutionError,
    alpha_beta_gamma,
    format_element,
    r_constant_candidates,
    resolve_r_constants,
    sqrt13_constant,
    theta_periods,
    zeta,
)
from .polyring import (
    SparsePolynomial,
    SquareMatrix,
    elementary_symmetric,
    evaluate,
    power_sum_poly,
    poly_pow,
    power_sums_from_elementary,
    substitute_linear,
)

DEFAULT_ORDER = 30
DEFAULT_SEED = 42
DEFAULT_TOLERANCE = 1e-9
SZ_POINTS = 20
SZ_RANGE = 10**6
NUMERIC_SAMPLES = (1j, 2j, 0.3 + 0.8j, -0.4 + 1.1j, 0.1 + 0.5j)
SZ_LABELS = ("4", "8", "12", "12'", "16", "18", "20", "30")

PASS, FAIL, ERROR = "pass", "fail", "error"


class InsufficientOrderError(ValueError):
    """The requested q-truncation is too small to identify leading terms."""


@dataclass
class CheckResult:
    name: str
    method: str
    status: str
    details: dict = field(default_factory=dict)
    elapsed: float = 0.0
    seed: int | None = None

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "method": self.method,
            "status": self.status,
            "details": self.details,
            "elapsed_ms": round(self.elapsed * 1000, 1),
        }
        if self.seed is not None:
            out["seed"] = self.seed
        return out


@dataclass
class Report:
    suite: str
    config: dict
    results: list[CheckResult]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def has_errors(self) -> bool:
        return any(r.status == ERROR for r in self.results)

    def to_json(self) -> dict:
        return {"suite": self.suite, "config": self.config, "results": [r.to_json() for r in self.results]}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=False, default=str)


def _timed(name: str, method: str, seed: int | None = None):
    """Wrap a function returning (ok, details) into a CheckResult producer."""

    def deco(fn: Callable[..., tuple[bool, dict]]):
        @functools.wraps(fn)
        def run(*args, **kwargs) -> CheckResult:
            t0 = time.perf_counter()
            try:
                ok, details = fn(*args, **kwargs)
                status = PASS if ok else FAIL
            except (SignResolutionError, InsufficientOrderError, F.BudgetExceededError) as exc:
                status, details = ERROR, {"error": f"{type(exc).__name__}: {exc}"}
            except Exception as exc:  # noqa: BLE001 - captured per result by contract
                status, details = ERROR, {"error": f"{type(exc).__name__}: {exc}"}
            s = kwargs.get("seed", seed)
            return CheckResult(name, method, status, details, time.perf_counter() - t0, s)

        return run

    return deco


def _controls(entries: list[tuple[str, bool]]) -> tuple[bool, list[dict]]:
    """Each entry is (description, identity_held); a control must not hold."""
    out = [{"control": d, "expected": "fail", "observed": "pass" if held else "fail"} for d, held in entries]
    return all(not held for _, held in entries), out


def _fmt(a: FieldElement | None) -> str | None:
    return None if a is None else format_element(a)


# -- field layer ----------------------------------------------------------------------------------------


@_timed("field_constants", "symbolic")
def check_field_constants() -> tuple[bool, dict]:
    s13 = sqrt13_constant()
    th = theta_periods()
    al, be, ga = alpha_beta_gamma()
    fixed, r2s, r4s = r_constant_candidates()
    r2, r4 = r2s[0], r4s[0]
    half = Fraction(1, 2)
    facts = {
        "gauss_sum_squared_is_13": s13 * s13 == CYC13(13),
        "sqrt13_embeds_positive": abs(s13.embed().imag) < 1e-12 and s13.embed().real > 0,
        "theta_quartic_annihilates_all": all(t**4 + t**3 + t * t * 2 - t * 4 + 3 == CYC13.zero for t in th),
        "theta_sum_is_minus_one": sum(th, CYC13.zero) == CYC13(-1),
        "theta_product_is_three": th[0] * th[1] * th[2] * th[3] == CYC13(3),
        "alpha_beta_gamma_sum_is_sqrt13": al + be + ga == s13,
        "r1_squared": fixed["r1"] ** 2 == s13 * -2 - 13,
        "r2_squared": r2 * r2 == (s13 * 3 - 13) * half,
        "r3_squared": fixed["r3"] ** 2 == s13 * 2 - 13,
        "r4_squared": r4 * r4 == (s13 * -3 - 13) * half,
    }
    ok_controls, controls = _controls(
        [
            ("r1^2 against the conjugate radicand -13+2*sqrt(13)", fixed["r1"] ** 2 == s13 * 2 - 13),
            ("theta_1 against the perturbed quartic z^4+z^3+2z^2-4z+4", th[0] ** 4 + th[0] ** 3 + th[0] * th[0] * 2 - th[0] * 4 + 4 == CYC13.zero),
        ]
    )
    details = {
        "facts": facts,
        "sqrt13": _fmt(s13),
        "theta_1_embedding": [round(th[0].embed().real, 12), round(th[0].embed().imag, 12)],
        "r2": _fmt(r2),
        "r4": _fmt(r4),
        "controls": controls,
    }
    return all(facts.values()) and ok_controls, details


# -- group relations -----------------------------------------------------------------------------------------


@_timed("group_relations", "symbolic")
def check_group_relations() -> tuple[bool, dict]:
    S, T, H = (F.generator_matrix(n) for n in "STH")
    eye = SquareMatrix.identity(6, CYC13)
    # every relation is projective: M = c * target, with c recorded
    scalars = {
        "S^2": (S @ S).scalar(),
        "T^13": (T**13).scalar(),
        "(ST)^3": ((S @ T) ** 3).scalar(),
        "H^6": (H**6).scalar(),
        "H^-1 T H / (-T^4)": (H.inverse() @ T @ H).scalar_multiple_of(-(T**4)),
        "H_word / H": F.h_word_scalar(),
    }
    facts = {k: v is not None for k, v in scalars.items()}
    facts["T^13 is exactly I"] = T**13 == eye
    ok_controls, controls = _controls(
        [
            ("T^12 is a scalar matrix", (T**12).scalar() is not None),
            ("S T is a scalar matrix", (S @ T).scalar() is not None),
            ("H^-1 T H proportional to T^3", (H.inverse() @ T @ H).scalar_multiple_of(T**3) is not None),
        ]
    )
    details = {"scalars": {k: _fmt(v) for k, v in scalars.items()}, "facts": facts, "controls": controls}
    return all(facts.values()) and ok_controls, details


# -- transformation laws ----------------------------------------------------------------------------------


def a_combination(nu: int, pattern: Sequence[int] = F.W_PATTERN) -> SparsePolynomial:
    a = [F.build_form("A", j).change_field(CYC13) for j in range(7)]
    out = a[0]
    for j, e in enumerate(pattern, start=1):
        out = out + a[j] * zeta(e * nu)
    return out


@_timed("A_transform", "symbolic")
def check_A_transform(order: int = 8) -> tuple[bool, dict]:
    cat = F.catalog()
    phi = cat.linear_roots()
    bad = [nu for nu in range(13) if phi[nu] != a_combination(nu)]
    w = F.build_root_family("w")
    w7_ok = w[7] == phi[7] * phi[7]
    winf_ok = w[13] == F.build_form("A", 0).change_field(CYC13) ** 2 * 13
    # series spot check: substituted sides agree for nu in {0, 5}
    ctx = Q.SeriesContext.level13(order)
    ev = Q.SeriesEvaluator([Q.theta13(i, ctx) for i in range(1, 7)])
    series_ok = {nu: ev.substitute(phi[nu]).agrees_with(ev.substitute(a_combination(nu)))[0] for nu in (0, 5)}
    swapped = (F.W_PATTERN[1], F.W_PATTERN[0]) + F.W_PATTERN[2:]
    ok_controls, controls = _controls([("exponent pattern with A1/A2 swapped at nu=1", phi[1] == a_combination(1, swapped))])
    details = {
        "failing_nu": bad,
        "w7_is_phi7_squared": w7_ok,
        "w_inf_is_13_A0_squared": winf_ok,
        "series_spot_check": {str(k): v for k, v in series_ok.items()},
        "controls": controls,
    }
    return not bad and w7_ok and winf_ok and all(series_ok.values()) and ok_controls, details


@_timed("D_transform", "symbolic")
def check_D_transform() -> tuple[bool, dict]:
    rc, tried = resolve_r_constants(F.d_transform_holds)
    residuals = F.d_transform_residuals(rc)
    flipped = rc._replace(r2=-rc.r2)
    flip_res = F.d_transform_residuals(flipped)
    ok_controls, controls = _controls([("r2 with its sign flipped", not flip_res)])
    details = {
        "sign_pairs_tried": tried,
        "resolved": {k: _fmt(v) for k, v in rc._asdict().items()},
        "failing": [list(r) for r in residuals],
        "flipped_r2_first_failure": list(flip_res[0]) if flip_res else None,
        "controls": controls,
    }
    return not residuals and ok_controls, details


@_timed("G_transform", "symbolic")
def check_G_transform() -> tuple[bool, dict]:
    cat = F.catalog()
    g0 = F.build_form("G", 0).change_field(CYC13)
    delta = F.build_root_family("delta")
    bad = [nu for nu in range(13) if substitute_linear(g0, cat.st_power(nu)) * 169 != delta[nu]]
    inv_h = substitute_linear(g0, F.generator_matrix("H")) == g0
    inv_t = substitute_linear(g0, F.generator_matrix("T")) == g0
    total = SparsePolynomial.zero(6, CYC13)
    for d in delta:
        total = total + d
    scaled = SquareMatrix.diag([2, 1, 1, 1, 1, 1], CYC13)
    ok_controls, controls = _controls([("G0 invariant under diag(2,1,1,1,1,1)", substitute_linear(g0, scaled) == g0)])
    details = {
        "failing_nu": bad,
        "G0_invariant_under_H": inv_h,
        "G0_invariant_under_T": inv_t,
        "delta_sum_is_zero": total.is_zero(),
        "controls": controls,
    }
    return not bad and inv_h and inv_t and total.is_zero() and ok_controls, details


@_timed("delta_sum", "symbolic")
def check_delta_sum() -> tuple[bool, dict]:
    delta = F.build_root_family("delta")
    total = SparsePolynomial.zero(6, CYC13)
    for d in delta:
        total = total + d
    partial = total - delta[13]
    ok_controls, controls = _controls([("sum without delta_inf", partial.is_zero())])
    return total.is_zero() and ok_controls, {"nonzero_terms": len(total), "controls": controls}


@_timed("G_tables", "symbolic")
def check_G_tables() -> tuple[bool, dict]:
    diff = F.g_table_diff()
    diffs = diff["diffs"]
    localized = (
        set(diffs) == {6}
        and diffs[6]["only_primary"] == ["-2*D12*D7"]
        and diffs[6]["only_restated"] == ["-2*D12*?7"]
        and diffs[6]["difference"] == F.catalog().d_product((12, 7)) * -2
    )
    details = {
        "differing_indices": sorted(diffs),
        "differences": {
            f"G{j}": {"only_primary": d["only_primary"], "only_restated": d["only_restated"], "terms": len(d["difference"])}
            for j, d in diffs.items()
        },
        "defects": diff["defects"],
    }
    return localized and len(diff["defects"]) == 1, details


# -- invariance -----------------------------------------------------------------------------------------------


def random_points(seed: int, count: int = SZ_POINTS, bound: int = SZ_RANGE) -> list[list[int]]:
    rng = random.Random(seed)
    return [[rng.randint(-bound, bound) for _ in range(6)] for _ in range(count)]


@functools.lru_cache(maxsize=8)
def _sz_evaluators(seed: int, count: int, matrix: str):
    """(evaluator at x, evaluator at M x) for each seeded point."""
    m = F.generator_matrix(matrix) if matrix != "diag" else SquareMatrix.diag([2, 1, 1, 1, 1, 1], CYC13)
    return [(F.FamilyEvaluator(x), F.FamilyEvaluator(m.apply(x))) for x in random_points(seed, count)]


def check_invariance(label, method: str = "schwartz_zippel", seed: int = DEFAULT_SEED, points: int = SZ_POINTS, heavy: bool = False) -> CheckResult:
    lab = F.normalize_label(label)
    if method == "symbolic":
        return _check_invariance_symbolic(lab, heavy, name=f"invariance[{lab}]/symbolic")
    if method == "schwartz_zippel":
        return _check_invariance_sz(lab, seed, points, name=f"invariance[{lab}]/schwartz_zippel")
    raise ValueError(f"unknown invariance method {method!r}")


def _check_invariance_sz(label: str, seed: int, points: int, name: str) -> CheckResult:
    @_timed(name, "schwartz_zippel", seed)
    def run(**__):
        inv = F.invariant_poly(label)
        mismatches = {}
        for g in ("S", "T"):
            bad = [i for i, (ex, emx) in enumerate(_sz_evaluators(seed, points, g)) if ex.invariant(inv) != emx.invariant(inv)]
            if bad:
                mismatches[g] = bad
        held = all(ex.invariant(inv) == emx.invariant(inv) for ex, emx in _sz_evaluators(seed, 3, "diag"))
        ok_controls, controls = _controls([(f"Phi_{label} under diag(2,1,1,1,1,1)", held)]) if label == "4" else (True, [])
        details = {"points_per_generator": points, "generators": ["S", "T"], "mismatching_points": mismatches}
        if controls:
            details["controls"] = controls
        return not mismatches and ok_controls, details

    return run(seed=seed)


def _check_invariance_symbolic(label: str, heavy: bool, name: str) -> CheckResult:
    @_timed(name, "symbolic")
    def run():
        inv = F.invariant_poly(label)
        poly = inv.expand(heavy=heavy)
        results = {g: substitute_linear(poly, F.generator_matrix(g)) == poly for g in ("S", "T")}
        ctrl = substitute_linear(poly, SquareMatrix.diag([2, 1, 1, 1, 1, 1], CYC13)) == poly
        ok_controls, controls = _controls([(f"Phi_{label} under diag(2,1,1,1,1,1)", ctrl)])
        details = {
            "terms": len(poly),
            "rational_coefficients": poly.is_rational(),
            "invariant_under": results,
            "controls": controls,
        }
        return all(results.values()) and poly.is_rational() and ok_controls, details

    return run()


# -- q-series identities ------------------------------------------------------------------------------------------


def _require_order(order: int) -> None:
    if order < 3:
        raise InsufficientOrderError(f"order must be at least 3, got {order}")


@functools.lru_cache(maxsize=4)
def theta_series_data(order: int) -> dict:
    """All level-13 series used by the series checks, exact below q^(order+3).

    Three extra powers of q beyond ``order`` ensure that even Delta^2 E_6,
    which starts at q^2, is compared on at least order+1 coefficients.
    """
    ctx = Q.SeriesContext.level13(order + 3)
    xs = Q.theta_point13(ctx)
    ev = Q.SeriesEvaluator(xs)
    fam = {k: [ev.substitute(p) for p in F.build_root_family(k)] for k in ("w", "delta")}
    raw = {
        "sum_w": Q.power_sum_series(fam["w"], 1),
        "sum_w2": Q.power_sum_series(fam["w"], 2),
        "sum_w3": Q.power_sum_series(fam["w"], 3),
        "sum_w4": Q.power_sum_series(fam["w"], 4),
        "sum_w5": Q.power_sum_series(fam["w"], 5),
        "sum_d": Q.power_sum_series(fam["delta"], 1),
        "sum_d2": Q.power_sum_series(fam["delta"], 2),
        "sum_d3": Q.power_sum_series(fam["delta"], 3),
        "sum_d5": Q.power_sum_series(fam["delta"], 5),
    }
    key = {("w", 1): "sum_w", ("w", 2): "sum_w2", ("w", 3): "sum_w3", ("w", 4): "sum_w4", ("w", 5): "sum_w5",
           ("delta", 2): "sum_d2", ("delta", 3): "sum_d3", ("delta", 5): "sum_d5"}
    phi = {}
    for label, inv in F.INVARIANTS.items():
        total = None
        for c, f, k in inv.parts:
            t = raw[key[(f, k)]].scale(c)
            total = t if total is None else total + t
        phi[label] = total
    d = Q.delta(ctx)
    e4, e6 = Q.eisenstein(4, ctx), Q.eisenstein(6, ctx)
    e8 = Q.eta_power(8, ctx)
    modular = {"Delta": d, "E4": e4, "E6": e6, "eta8": e8, "Delta E6": d * e6, "eta8 Delta E4": e8 * d * e4, "Delta^2 E6": d * d * e6}
    return {"ctx": ctx, "xs": xs, "families": fam, "raw": raw, "phi": phi, "modular": modular}


def _compare(a: Q.PuiseuxSeries, b: Q.PuiseuxSeries) -> dict:
    a = a.to_rational() if a.is_rational() else a
    ok, first = a.agrees_with(b)
    prec = min(a.prec, b.prec)
    start = b.valuation if b.valuation is not None else 0
    den = a.ctx.den
    count = max(0, -(-(prec - start) // den))
    out = {"equal": ok, "integer_coefficients_compared": count, "exact_below": str(Fraction(prec, den))}
    if not ok:
        out["first_mismatch_exponent"] = str(Fraction(first, den))
    return out


@_timed("modular_identification", "qseries")
def check_modular_identification(order: int = DEFAULT_ORDER) -> tuple[bool, dict]:
    _require_order(order)
    data = theta_series_data(order)
    phi, mod, raw = data["phi"], data["modular"], data["raw"]
    zero = Q.PuiseuxSeries.zero(data["ctx"])
    targets = {
        "4": zero, "8": zero, "16": zero,
        "12": mod["Delta"], "12'": mod["Delta"], "18": mod["Delta E6"],
        "20": mod["eta8 Delta E4"], "30": mod["Delta^2 E6"],
    }
    comparisons = {label: _compare(phi[label], t) for label, t in targets.items()}
    expected_raw = {"sum_d2": (-13 * 52, 1), "sum_w3": (-13 * 30, 1), "sum_d3": (13 * 6, 1),
                    "sum_w5": (13 * 25, Fraction(4, 3)), "sum_d5": (-13 * 1315, 2)}
    leading = {}
    for k, (c, v) in expected_raw.items():
        s = raw[k]
        got_c, got_v = s.leading_coefficient(), s.valuation_q
        leading[k] = {"valuation": str(got_v), "coefficient": _fmt(got_c),
                      "ok": got_v == v and got_c == CYC13(c)}
    rational = {label: s.is_rational() for label, s in phi.items()}
    rational.update({k: s.is_rational() for k, s in raw.items()})
    enough = all(c["integer_coefficients_compared"] >= order for l, c in comparisons.items() if l not in ("4", "8", "16"))
    ok_controls, controls = _controls(
        [
            ("Phi_20(x) against Delta E4 without eta^8", _compare(phi["20"], mod["Delta"] * mod["E4"])["equal"]),
            ("Phi_12(x) against -Delta", _compare(phi["12"], -mod["Delta"])["equal"]),
        ]
    )
    ok = all(c["equal"] for c in comparisons.values()) and all(v["ok"] for v in leading.values()) and all(rational.values()) and enough
    return ok and ok_controls, {"order": order, "comparisons": comparisons, "raw_leading_terms": leading,
                                "rational": all(rational.values()), "controls": controls}


@_timed("e8_equation", "qseries")
def check_e8_equation(order: int = DEFAULT_ORDER) -> tuple[bool, dict]:
    _require_order(order)
    data = theta_series_data(order)
    phi, mod = data["phi"], data["modular"]
    p12, p18, p20, p30 = (phi[k].to_rational() for k in ("12", "18", "20", "30"))
    e8 = p20**3 - p30**2 - p12**5 * 1728
    d, e4, e6 = mod["Delta"], mod["E4"], mod["E6"]
    gen = d**4 * (e4**3 - e6**2) - d**5 * 1728
    chain = p12 * p18 - p30
    ok_controls, controls = _controls([("Phi_20^3 + Phi_30^2 = 1728 Phi_12^5", (p20**3 + p30**2 - p12**5 * 1728).is_zero())])
    details = {
        "order": order,
        "e8_residual_zero": e8.is_zero(),
        "e8_exact_below": str(e8.prec_q),
        "generator_identity_zero": gen.is_zero(),
        "phi12_phi18_minus_phi30_zero": chain.is_zero(),
        "controls": controls,
    }
    return e8.is_zero() and gen.is_zero() and chain.is_zero() and ok_controls, details


@_timed("curve_C", "qseries")
def check_curve_C(order: int = DEFAULT_ORDER, seed: int = DEFAULT_SEED) -> tuple[bool, dict]:
    _require_order(order)
    phi = theta_series_data(order)["phi"]
    vanish = {k: phi[k].is_zero() for k in ("4", "8", "phi12", "16")}
    rng = random.Random(seed)
    pt = [Fraction(rng.randint(-99, 99), rng.randint(1, 9)) for _ in range(6)]
    value = F.invariant_poly("4").evaluate(pt)
    ok_controls, controls = _controls([("Phi_4 vanishes at a random rational point", value.is_zero())])
    return all(vanish.values()) and ok_controls, {"order": order, "vanishing": vanish, "controls": controls}


# -- icosahedral baseline -------------------------------------------------------------------------------------------


@_timed("icosahedral", "qseries")
def check_icosahedral(order: int = DEFAULT_ORDER) -> tuple[bool, dict]:
    _require_order(order)
    f, h, t = F.icosahedral_forms()
    relation = t * t + h**3 - f**5 * 1728
    hess = F.hessian(f)
    jac = F.jacobian(f, h)
    # the determinant constructions are checked up to a constant factor;
    # the observed factor is recorded next to the printed one
    hess_factor, jac_factor = proportional(hess, h), proportional(jac, t)
    facts = {
        "T^2 + H^3 - 1728 f^5 = 0": relation.is_zero(),
        "Hessian(f) proportional to H": hess_factor is not None,
        "Jacobian(f, H) proportional to T": jac_factor is not None,
    }
    factors = {
        "Hessian(f) / H": {"observed": str(hess_factor), "printed": "121", "agrees": hess_factor == 121},
        "Jacobian(f, H) / T": {"observed": str(jac_factor), "printed": "-20", "agrees": jac_factor == -20},
    }
    ctx = Q.SeriesContext.level5(order + 3)
    ev = Q.SeriesEvaluator(Q.theta_point5(ctx))
    d, e4, e6, e8 = Q.delta(ctx), Q.eisenstein(4, ctx), Q.eisenstein(6, ctx), Q.eta_power(8, ctx)
    fx, hx, tx = (ev.substitute(p) for p in (f, h, t))
    series = {
        "f(x) = -Delta": _compare(fx, -d),
        "H(x) = -eta^8 Delta E4": _compare(hx, -(e8 * d * e4)),
        "T(x) = Delta^2 E6": _compare(tx, d * d * e6),
    }
    ok_controls, controls = _controls(
        [("f(x) = +Delta", _compare(fx, d)["equal"]), ("Hessian(f) proportional to T", proportional(hess, t) is not None)]
    )
    ok = all(facts.values()) and all(s["equal"] for s in series.values())
    return ok and ok_controls, {"order": order, "symbolic": facts, "determinant_factors": factors, "series": series,
                                "controls": controls}


# -- numeric transformation laws -------------------------------------------------------------------------------------


def _matvec(m: SquareMatrix, v: Sequence[complex]) -> list[complex]:
    return [sum(m[i, j].embed() * v[j] for j in range(6)) for i in range(6)]


def theta_transform_residuals(z: complex, branch: int = 1) -> tuple[float, float]:
    """Max componentwise residuals of the translation and inversion laws at z."""
    S, T = F.generator_matrix("S"), F.generator_matrix("T")
    a = Q.numeric_theta_vector(z)
    lhs_t = Q.numeric_theta_vector(z + 1)
    rhs_t = [cmath.exp(-3j * math.pi / 4) * v for v in _matvec(T, a)]
    lhs_s = Q.numeric_theta_vector(-1 / z)
    root = cmath.sqrt(z) * branch
    rhs_s = [cmath.exp(1j * math.pi / 4) * root * v for v in _matvec(S, a)]
    res_t = max(abs(x - y) for x, y in zip(lhs_t, rhs_t))
    res_s = max(abs(x - y) for x, y in zip(lhs_s, rhs_s))
    return res_t, res_s


@_timed("theta_transformations", "numeric")
def check_numeric_transforms(samples: Sequence[complex] = NUMERIC_SAMPLES, tolerance: float = DEFAULT_TOLERANCE) -> tuple[bool, dict]:
    rows = {}
    ok = True
    for z in samples:
        z = complex(z)
        res_t, res_s = theta_transform_residuals(z)
        arg = cmath.phase(cmath.sqrt(z))
        good = res_t < tolerance and res_s < tolerance and 0 < arg <= math.pi / 2
        ok &= good
        rows[f"{z.real:+.2f}{z.imag:+.2f}i"] = {"translation": res_t, "inversion": res_s, "arg_sqrt_z": arg, "ok": good}
    wrong = [theta_transform_residuals(complex(z), branch=-1)[1] for z in samples]
    ok_controls, controls = _controls([("inversion law with -sqrt(z)", max(wrong) < tolerance)])
    return ok and ok_controls, {"tolerance": tolerance, "samples": rows, "wrong_branch_min_residual": min(wrong),
                                "controls": controls}


# -- sections -------------------------------------------------------------------------------------------------------


def abstract_invariant(label: str, nw: int = 14, nd: int = 14) -> SparsePolynomial:
    """An invariant as a polynomial in abstract w_0..w_inf, delta_0..delta_inf."""
    inv = F.invariant_poly(label)
    n = nw + nd
    total = SparsePolynomial.zero(n, QQ)
    for c, fam, k in inv.parts:
        base = 0 if fam == "w" else nw
        for i in range(nw if fam == "w" else nd):
            e = [0] * n
            e[base + i] = k
            total = total + SparsePolynomial.monomial(e, c, QQ)
    return total


def restrict(p: SparsePolynomial, keep: Sequence[int]) -> SparsePolynomial:
    """Set every variable outside ``keep`` to zero; survivors are renumbered in order."""
    keep = list(keep)
    drop = [i for i in range(p.nvars) if i not in keep]
    terms = {}
    for e, c in p.terms.items():
        if any(e[i] for i in drop):
            continue
        terms[tuple(e[i] for i in keep)] = c
    return SparsePolynomial(len(keep), p.field, terms)


def proportional(a: SparsePolynomial, b: SparsePolynomial) -> Fraction | None:
    """c with a = c*b (both nonzero), else None."""
    if a.is_zero() or b.is_zero() or set(a.terms) != set(b.terms):
        return None
    e0 = next(iter(b.terms))
    c = (a.terms[e0] / b.terms[e0]).to_fraction()
    return c if a == b.scale(c) else None


def pencil_reduction() -> dict:
    """Reduce the degree-5 delta equation to the pencil lam*s2*s3 + mu*s5 with s1 = 0."""
    c12, c18, c30 = (F.invariant_poly(k).parts[0][0] for k in ("12", "18", "30"))
    bridge = c30 / (c12 * c18)  # Phi12*Phi18 - Phi30 = c12 c18 (p2 p3 - bridge p5)
    # symbolic in s2..s5 (variables 1..4), with s1 = 0
    s = [SparsePolynomial.zero(4, QQ)] + [SparsePolynomial.variable(i, 4, QQ) for i in range(1, 5)]
    p = power_sums_from_elementary(s)
    reduced = p[1] * p[2] - p[4].scale(bridge)
    s2s3 = s[1] * s[2]
    lam = reduced.coefficient((1, 1, 0, 0)).to_fraction()
    mu = reduced.coefficient((0, 0, 0, 1)).to_fraction()
    exact = reduced == s2s3.scale(lam) + s[4].scale(mu)
    return {"bridge": bridge, "lam": lam, "mu": mu, "ratio": mu / lam, "exact_form": exact}


def _pencil_in_coordinates(ratio: Fraction) -> bool:
    """Independent route: restrict to delta_0..delta_4 with delta_4 = -(delta_0+..+delta_3)."""
    base = abstract_invariant("12", 0, 14) * abstract_invariant("18", 0, 14) - abstract_invariant("30", 0, 14)
    five = restrict(base, range(5))
    lin = [SparsePolynomial.variable(i, 4, QQ) for i in range(1, 5)]
    last = -(lin[0] + lin[1] + lin[2] + lin[3])
    sub = lin + [last]

    def compose(poly: SparsePolynomial) -> SparsePolynomial:
        out = SparsePolynomial.zero(4, QQ)
        for e, c in poly.terms.items():
            t = SparsePolynomial.constant(4, 1, QQ)
            for i, k in enumerate(e):
                if k:
                    t = t * poly_pow(sub[i], k)
            out = out + t.scale(c.to_fraction())
        return out

    lhs = compose(five)
    target = compose(elementary_symmetric(5, 2) * elementary_symmetric(5, 3) + elementary_symmetric(5, 5).scale(ratio))
    return proportional(lhs, target) is not None


@_timed("sections", "symbolic")
def check_sections() -> tuple[bool, dict]:
    # Bring: Phi4, Phi8, Phi12 = Phi12' in (w, delta); keep w_0..w_4
    bring_sys = [abstract_invariant(k) for k in ("4", "8", "phi12")]
    n = 28
    w3 = SparsePolynomial.zero(n, QQ)
    d2 = SparsePolynomial.zero(n, QQ)
    for i in range(14):
        e = [0] * n
        e[i] = 3
        w3 = w3 + SparsePolynomial.monomial(e, 1, QQ)
        e = [0] * n
        e[14 + i] = 2
        d2 = d2 + SparsePolynomial.monomial(e, 1, QQ)
    printed_third = w3 - d2.scale(Fraction(15, 26))
    printed_ok = proportional(bring_sys[2], printed_third) is not None
    bring = [restrict(p, range(5)) for p in bring_sys]
    bring_ok = [proportional(b, power_sum_poly(5, k)) is not None for b, k in zip(bring, (1, 2, 3))]
    # Fricke: Phi4, Phi8, Phi16 in w only
    fricke = [restrict(abstract_invariant(k, 14, 0), range(5)) for k in ("4", "8", "16")]
    fricke_ok = [proportional(b, power_sum_poly(5, k)) is not None for b, k in zip(fricke, (1, 2, 4))]
    pen = pencil_reduction()
    target = Fraction(-676, 413)
    coord_ok = _pencil_in_coordinates(pen["ratio"])
    bridge_ok = pen["bridge"] == Fraction(4056, 1315) == Fraction(13 * 52 * 6, 1315)
    ok_controls, controls = _controls(
        [
            ("Bring system against {p1, p2, p4}", all(proportional(b, power_sum_poly(5, k)) is not None for b, k in zip(bring, (1, 2, 4)))),
            ("pencil parameter (1 : -676/412)", pen["ratio"] == Fraction(-676, 412)),
            ("bridge with an extra factor 13: (13*52)*(13*6)/1315 = 4056/1315", Fraction(13 * 52 * 13 * 6, 1315) == Fraction(4056, 1315)),
        ]
    )
    details = {
        "bring_third_equation_matches_printed": printed_ok,
        "bring": bring_ok,
        "fricke": fricke_ok,
        "pencil": {"lambda": str(pen["lam"]), "mu": str(pen["mu"]), "ratio": str(pen["ratio"]), "coordinate_check": coord_ok},
        "bridge": str(pen["bridge"]),
        "controls": controls,
    }
    ok = printed_ok and all(bring_ok) and all(fricke_ok) and pen["ratio"] == target and pen["exact_form"] and coord_ok and bridge_ok
    return ok and ok_controls, details


NODE_CASES = {
    "iii": ((2, 1), ("-2", "-2", "-2", "3+r", "3-r")),
    "iv": ((25, -12), ("-2", "-2", "-2", "3", "3")),
    "v": ((50, 1), ("1", "1", "1", "1", "-4")),
    "vi": ((2, -1), ("0", "1", "-1", "1", "-1")),
}
GENERIC_POINT = (0, 1, -1, 2, -2)


def _node_point(coords: Sequence[str]):
    r = QSQRT_M7.gen
    out = []
    for c in coords:
        if "r" in c:
            a, sign = int(c[0]), (1 if "+" in c else -1)
            out.append(QSQRT_M7(a) + r * sign)
        else:
            out.append(QSQRT_M7(int(c)))
    return out


def quintic_singularity(mu_lam: tuple[int, int], point) -> dict:
    """Surface mu*s5 + lam*s2*s3 in the hyperplane s1 = 0, at ``point``."""
    mu, lam = mu_lam
    s1 = elementary_symmetric(5, 1, QSQRT_M7)
    fpoly = (elementary_symmetric(5, 5, QSQRT_M7) * mu) + (elementary_symmetric(5, 2, QSQRT_M7) * elementary_symmetric(5, 3, QSQRT_M7)) * lam
    grad = [evaluate(fpoly.derivative(i), point) for i in range(1, 6)]
    # rank of [grad s1; grad F] <= 1 iff grad F is constant across coordinates
    rank_le_1 = all(g == grad[0] for g in grad)
    return {
        "on_hyperplane": evaluate(s1, point).is_zero(),
        "on_surface": evaluate(fpoly, point).is_zero(),
        "singular": rank_le_1,
    }


@_timed("quintic_nodes", "symbolic")
def check_quintic_nodes() -> tuple[bool, dict]:
    cases = {}
    for name, (ml, coords) in NODE_CASES.items():
        cases[name] = quintic_singularity(ml, _node_point(coords))
    generic = quintic_singularity((2, 1), [QSQRT_M7(x) for x in GENERIC_POINT])
    ok_controls, controls = _controls([("generic point (0,1,-1,2,-2) on case (iii) is singular", generic["singular"])])
    ok = all(all(v.values()) for v in cases.values()) and generic["on_surface"] and generic["on_hyperplane"]
    return ok and ok_controls, {"cases": cases, "generic_point": generic, "controls": controls}


# -- suites -------------------------------------------------------------------------------------------------------------

SUITES = ("all", "field", "group", "transform", "forms", "invariance", "series", "icosahedral", "numeric", "sections")


@dataclass(frozen=True)
class SuiteConfig:
    suite: str = "all"
    order: int = DEFAULT_ORDER
    seed: int = DEFAULT_SEED
    tolerance: float = DEFAULT_TOLERANCE
    heavy: bool = False

    def __post_init__(self):
        if self.suite not in SUITES:
            raise ValueError(f"unknown suite {self.suite!r}; choose from {', '.join(SUITES)}")
        if self.order < 3:
            raise InsufficientOrderError(f"order must be at least 3, got {self.order}")


def _suite_plan(cfg: SuiteConfig) -> list[tuple[str, Callable[[], CheckResult]]]:
    plan = {
        "field": [lambda: check_field_constants()],
        "group": [lambda: check_group_relations()],
        "transform": [lambda: check_A_transform(), lambda: check_D_transform(), lambda: check_G_transform()],
        "forms": [lambda: check_delta_sum(), lambda: check_G_tables()],
        "invariance": (
            [lambda l=l: check_invariance(l, "schwartz_zippel", seed=cfg.seed) for l in SZ_LABELS]
            + [lambda l=l: check_invariance(l, "symbolic", heavy=cfg.heavy) for l in (("4", "8", "12", "12'", "16") if cfg.heavy else ("4", "8"))]
        ),
        "series": [
            lambda: check_modular_identification(cfg.order),
            lambda: check_e8_equation(cfg.order),
            lambda: check_curve_C(cfg.order, seed=cfg.seed),
        ],
        "icosahedral": [lambda: check_icosahedral(cfg.order)],
        "numeric": [lambda: check_numeric_transforms(tolerance=cfg.tolerance)],
        "sections": [lambda: check_sections(), lambda: check_quintic_nodes()],
    }
    names = [s for s in SUITES if s != "all"] if cfg.suite == "all" else [cfg.suite]
    return [(n, fn) for n in names for fn in plan[n]]


def run_suite(config: SuiteConfig | dict | None = None) -> Report:
    """Run the selected checks in a fixed order; errors are captured per check."""
    if config is None:
        cfg = SuiteConfig()
    elif isinstance(config, dict):
        cfg = SuiteConfig(**config)
    else:
        cfg = config
    results = [fn() for _, fn in _suite_plan(cfg)]
    conf = {"order": cfg.order, "seed": cfg.seed, "tolerance": cfg.tolerance, "heavy": cfg.heavy}
    return Report(cfg.suite, conf, results)
