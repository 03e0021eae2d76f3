"""Command-line entry point: ``x13verify verify`` and ``x13verify dump``.

Exit status: 0 when every selected check passes, 1 when a check fails,
2 for usage errors, unknown names, checks that errored, or internal errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import traceback
from fractions import Fraction

from . import forms as F
from . import qseries as Q
from . import verify as V
from ._kernels import BACKEND
from .cycfield import format_element

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


def _positive_order(text: str) -> int:
    value = int(text)
    if value < 3:
        raise argparse.ArgumentTypeError(f"order must be at least 3 (got {value})")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="x13verify", description="Exact checks for the PSL(2,13) invariants and theta constants.")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--order", type=_positive_order, default=V.DEFAULT_ORDER, help="q-truncation (default 30, at least 3)")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--output", help="write to this file (UTF-8) instead of stdout")

    pv = sub.add_parser("verify", parents=[common], help="run verification suites")
    pv.add_argument("--suite", choices=V.SUITES, default="all")
    pv.add_argument("--seed", type=int, default=V.DEFAULT_SEED)
    pv.add_argument("--tolerance", type=float, default=V.DEFAULT_TOLERANCE, help="numeric tolerance")
    pv.add_argument("--heavy", action="store_true", help="also expand invariants of degree 12 and 16 symbolically")

    pd = sub.add_parser("dump", parents=[common], help="dump forms, matrices or a q-expansion")
    pd.add_argument("what", choices=("forms", "matrices", "qexp"))
    pd.add_argument("name", nargs="?", help="series name for qexp (see 'dump qexp list')")
    return parser


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
            if not text.endswith("\n"):
                fh.write("\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


# -- verify --------------------------------------------------------------------------------------------------


def format_report_text(report: V.Report) -> str:
    lines = [f"suite: {report.suite}  order: {report.config['order']}  seed: {report.config['seed']}  kernels: {BACKEND}"]
    for r in report.results:
        lines.append(f"[{r.status.upper():5s}] {r.name:36s} {r.method:16s} {r.elapsed * 1000:9.1f} ms")
        if not r.passed:
            lines.append("        " + json.dumps(r.details, default=str)[:2000])
    n_pass = sum(r.passed for r in report.results)
    lines.append(f"{n_pass}/{len(report.results)} checks passed")
    return "\n".join(lines)


def cmd_verify(args) -> int:
    cfg = V.SuiteConfig(suite=args.suite, order=args.order, seed=args.seed, tolerance=args.tolerance, heavy=args.heavy)
    report = V.run_suite(cfg)
    _emit(report.dumps() if args.format == "json" else format_report_text(report), args.output)
    if report.has_errors:
        return EXIT_ERROR
    return EXIT_OK if report.passed else EXIT_FAIL


# -- dump ------------------------------------------------------------------------------------------------------


def _series_names() -> list[str]:
    names = [f"a{i}" for i in range(1, 7)] + [f"x{i}" for i in range(1, 7)]
    names += ["eta", "eta8", "Delta", "E4", "E6", "theta5-a", "theta5-b"]
    names += [f"Phi{label}-on-x" for label in F.INVARIANT_LABELS if label != "phi12"] + ["phi12-on-x"]
    names += [f"A{j}-on-a" for j in range(7)] + [f"D{j}-on-a" for j in list(range(13)) + ["inf"]]
    names += [f"G{j}-on-a" for j in range(13)]
    return names


def resolve_series(name: str, order: int) -> Q.PuiseuxSeries:
    """Look up a named series, exact through q^order."""
    lookup = {n.lower(): n for n in _series_names()}
    key = lookup.get(name.lower())
    if key is None:
        raise KeyError(name)
    prec_q = order + 1
    if key.startswith("theta5-"):
        ctx = Q.SeriesContext.level5(prec_q)
        return Q.theta5(key[-1], ctx)
    ctx = Q.SeriesContext.level13(prec_q)
    if key[0] == "a" and key[1:].isdigit():
        return Q.theta13(int(key[1:]), ctx)
    if key[0] == "x" and key[1:].isdigit():
        return Q.theta_point13(ctx)[int(key[1:]) - 1]
    simple = {
        "eta": lambda: Q.eta(ctx),
        "eta8": lambda: Q.eta_power(8, ctx),
        "Delta": lambda: Q.delta(ctx),
        "E4": lambda: Q.eisenstein(4, ctx),
        "E6": lambda: Q.eisenstein(6, ctx),
    }
    if key in simple:
        return simple[key]()
    if key.endswith("-on-x"):
        label = F.normalize_label(key[: -len("-on-x")])
        s = V.theta_series_data(order)["phi"][label]
        return s.to_rational().truncate(ctx.prec)
    head = key[: -len("-on-a")]
    kind, index = head[0], head[1:]
    a = [Q.theta13(i, ctx) for i in range(1, 7)]
    return Q.substitute_series(F.build_form(kind, index), a)


def _dump_qexp(args) -> int:
    if not args.name or args.name == "list":
        _emit("\n".join(_series_names()), args.output)
        return EXIT_OK if args.name == "list" else EXIT_ERROR
    try:
        s = resolve_series(args.name, args.order)
    except KeyError:
        sys.stderr.write(f"unknown series {args.name!r}; candidates: {', '.join(_series_names())}\n")
        return EXIT_ERROR
    limit = args.order * s.ctx.den
    terms = [(e, c) for e, c in s.terms() if e <= limit]
    if args.format == "json":
        payload = {"name": args.name, "denominator": s.ctx.den, "entries": [[e, str(c.to_fraction()) if c.is_rational() else c.to_json()] for e, c in terms]}
        _emit(json.dumps(payload, indent=1), args.output)
    else:
        lines = [f"# {args.name} = {Q.format_leading(s)}  (exact below q^{s.prec_q})"]
        lines += [f"{e}/{s.ctx.den} : {format_element(c)}" for e, c in terms]
        _emit("\n".join(lines), args.output)
    return EXIT_OK


def forms_catalog_json() -> dict:
    cat = F.catalog()
    g_fixed = cat.g_forms("G")
    g_rest = cat.g_forms("G_restated")
    out = {
        "A": {str(j): F.build_form("A", j).to_json() for j in range(7)},
        "D": {str(j): F.build_form("D", j).to_json() for j in list(range(13)) + [F.INF]},
        "G": {str(j): g_fixed[j].to_json() for j in range(13)},
        "G_restated": {str(j): g_rest[j].to_json() for j in range(13)},
        "G_restated_defects": cat.g_table("G_restated").defects,
        "w": [p.to_json() for p in F.build_root_family("w")],
        "delta": [p.to_json() for p in F.build_root_family("delta")],
        "invariants": {
            label: {
                "degree": inv.degree,
                "parts": [{"constant": str(c), "family": fam, "power": k} for c, fam, k in inv.parts],
            }
            for label, inv in F.INVARIANTS.items()
        },
        "icosahedral": dict(zip(("f", "H", "T"), (p.to_json() for p in F.icosahedral_forms()))),
        "classical": {
            "bring": [p.to_json() for p in F.classical_varieties("bring")],
            "fricke": [p.to_json() for p in F.classical_varieties("fricke")],
            "quintic_pencil(1,-676/413)": [p.to_json() for p in F.classical_varieties("quintic_pencil", 1, Fraction(-676, 413))],
        },
    }
    for label in ("4", "8"):
        out["invariants"][label]["expanded"] = F.invariant_poly(label).expand().to_json()
    return out


def _dump_matrices(args) -> int:
    names = ("S", "T", "H", "P", "Q")
    mats = {n: F.generator_matrix(n) for n in names}
    if args.format == "json":
        _emit(json.dumps({n: m.to_json() for n, m in mats.items()}, indent=1), args.output)
    else:
        lines = []
        for n, m in mats.items():
            lines.append(f"{n} =")
            for i in range(6):
                lines.append("  [" + ", ".join(format_element(m[i, j]) for j in range(6)) + "]")
        _emit("\n".join(lines), args.output)
    return EXIT_OK


def cmd_dump(args) -> int:
    if args.what == "qexp":
        return _dump_qexp(args)
    if args.what == "matrices":
        return _dump_matrices(args)
    _emit(json.dumps(forms_catalog_json(), indent=1), args.output)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            return cmd_verify(args)
        return cmd_dump(args)
    except Exception:  # noqa: BLE001 - exit status 2 by contract
        traceback.print_exc()
        return EXIT_ERROR


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
