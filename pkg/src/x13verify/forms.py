"""The concrete matrices and polynomials of the PSL(2,13) construction.

Everything here is transcribed term-for-term from printed tables into small
text fixtures and parsed, so a transcription can be diffed against the source
rather than trusted.  The catalog is built lazily and cached; all objects are
immutable once built.
"""

from __future__ import annotations

import functools
import re
from math import gcd
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .cycfield import CYC13, QQ, FieldElement, RConstants, sqrt13_constant, zeta
from .polyring import (
    SparsePolynomial,
    SquareMatrix,
    elementary_symmetric,
    evaluate,
    power_sum,
    power_sum_poly,
    substitute_linear,
)

NVARS = 6
INF = "inf"
ROOT_INDICES: tuple = tuple(range(13)) + (INF,)


class FormIndexError(ValueError):
    """Unknown form family or index out of range."""


class BudgetExceededError(RuntimeError):
    """A symbolic expansion was refused because of its size."""


# -- polynomial text fixtures ------------------------------------------------------------

_A_TEXT = {
    0: "z1*z4 + z2*z5 + z3*z6",
    1: "z1^2 - 2*z3*z4",
    2: "-z5^2 - 2*z2*z4",
    3: "z2^2 - 2*z1*z5",
    4: "z3^2 - 2*z2*z6",
    5: "-z4^2 - 2*z1*z6",
    6: "-z6^2 - 2*z3*z5",
}

_D_TEXT = {
    0: "z1*z2*z3",
    1: "2*z2*z3^2 + z2^2*z6 - z4^2*z5 + z1*z5*z6",
    2: "-z6^3 + z2^2*z4 - 2*z2*z5^2 + z1*z4*z5 + 3*z3*z5*z6",
    3: "2*z1*z2^2 + z1^2*z5 - z4*z6^2 + z3*z4*z5",
    4: "-z2^2*z3 + z1*z6^2 - 2*z4^2*z6 - z1*z3*z5",
    5: "-z4^3 + z3^2*z5 - 2*z3*z6^2 + z2*z5*z6 + 3*z1*z4*z6",
    6: "-z5^3 + z1^2*z6 - 2*z1*z4^2 + z3*z4*z6 + 3*z2*z4*z5",
    7: "-z2^3 + z3*z4^2 - z1*z3*z6 - 3*z1*z2*z5 + 2*z1^2*z4",
    8: "-z1^3 + z2*z6^2 - z2*z3*z5 - 3*z1*z3*z4 + 2*z3^2*z6",
    9: "2*z1^2*z3 + z3^2*z4 - z5^2*z6 + z2*z4*z6",
    10: "-z1*z3^2 + z2*z4^2 - 2*z4*z5^2 - z1*z2*z6",
    11: "-z3^3 + z1*z5^2 - z1*z2*z4 - 3*z2*z3*z6 + 2*z2^2*z5",
    12: "-z1^2*z2 + z3*z5^2 - 2*z5*z6^2 - z2*z3*z4",
    INF: "z4*z5*z6",
}

# The sextic table as printed where the sextics are first introduced.
G_TABLE_PRIMARY = """
G0: D0^2 + Dinf^2
G1: -D7^2 + 2*D0*D1 + 10*Dinf*D1 + 2*D2*D12 - 2*D3*D11 - 4*D4*D10 - 2*D9*D5
G2: -2*D1^2 - 4*D0*D2 + 6*Dinf*D2 - 2*D4*D11 + 2*D5*D10 - 2*D6*D9 - 2*D7*D8
G3: -D8^2 + 2*D0*D3 + 10*Dinf*D3 + 2*D6*D10 - 2*D9*D7 - 4*D12*D4 - 2*D1*D2
G4: -D2^2 + 10*D0*D4 - 2*Dinf*D4 + 2*D5*D12 - 2*D9*D8 - 4*D1*D3 - 2*D10*D7
G5: -2*D9^2 - 4*D0*D5 + 6*Dinf*D5 - 2*D10*D8 + 2*D6*D12 - 2*D2*D3 - 2*D11*D7
G6: -2*D3^2 - 4*D0*D6 + 6*Dinf*D6 - 2*D12*D7 + 2*D2*D4 - 2*D5*D1 - 2*D8*D11
G7: -2*D10^2 + 6*D0*D7 + 4*Dinf*D7 - 2*D1*D6 - 2*D2*D5 - 2*D8*D12 - 2*D9*D11
G8: -2*D4^2 + 6*D0*D8 + 4*Dinf*D8 - 2*D3*D5 - 2*D6*D2 - 2*D11*D10 - 2*D1*D7
G9: -D11^2 + 2*D0*D9 + 10*Dinf*D9 + 2*D5*D4 - 2*D1*D8 - 4*D10*D12 - 2*D3*D6
G10: -D5^2 + 10*D0*D10 - 2*Dinf*D10 + 2*D6*D4 - 2*D3*D7 - 4*D9*D1 - 2*D12*D11
G11: -2*D12^2 + 6*D0*D11 + 4*Dinf*D11 - 2*D9*D2 - 2*D5*D6 - 2*D7*D4 - 2*D3*D8
G12: -D6^2 + 10*D0*D12 - 2*Dinf*D12 + 2*D2*D10 - 2*D1*D11 - 4*D3*D9 - 2*D4*D8
"""

# The same table as restated next to the transformation law.  In that
# printing one factor of G6 lost its letter ("?7" below marks the slot).
G_TABLE_RESTATED = """
G0: D0^2 + Dinf^2
G1: -D7^2 + 2*D0*D1 + 10*Dinf*D1 + 2*D2*D12 - 2*D3*D11 - 4*D4*D10 - 2*D9*D5
G2: -2*D1^2 - 4*D0*D2 + 6*Dinf*D2 - 2*D4*D11 + 2*D5*D10 - 2*D6*D9 - 2*D7*D8
G3: -D8^2 + 2*D0*D3 + 10*Dinf*D3 + 2*D6*D10 - 2*D9*D7 - 4*D12*D4 - 2*D1*D2
G4: -D2^2 + 10*D0*D4 - 2*Dinf*D4 + 2*D5*D12 - 2*D9*D8 - 4*D1*D3 - 2*D10*D7
G5: -2*D9^2 - 4*D0*D5 + 6*Dinf*D5 - 2*D10*D8 + 2*D6*D12 - 2*D2*D3 - 2*D11*D7
G6: -2*D3^2 - 4*D0*D6 + 6*Dinf*D6 - 2*D12*?7 + 2*D2*D4 - 2*D5*D1 - 2*D8*D11
G7: -2*D10^2 + 6*D0*D7 + 4*Dinf*D7 - 2*D1*D6 - 2*D2*D5 - 2*D8*D12 - 2*D9*D11
G8: -2*D4^2 + 6*D0*D8 + 4*Dinf*D8 - 2*D3*D5 - 2*D6*D2 - 2*D11*D10 - 2*D1*D7
G9: -D11^2 + 2*D0*D9 + 10*Dinf*D9 + 2*D5*D4 - 2*D1*D8 - 4*D10*D12 - 2*D3*D6
G10: -D5^2 + 10*D0*D10 - 2*Dinf*D10 + 2*D6*D4 - 2*D3*D7 - 4*D9*D1 - 2*D12*D11
G11: -2*D12^2 + 6*D0*D11 + 4*Dinf*D11 - 2*D9*D2 - 2*D5*D6 - 2*D7*D4 - 2*D3*D8
G12: -D6^2 + 10*D0*D12 - 2*Dinf*D12 + 2*D2*D10 - 2*D1*D11 - 4*D3*D9 - 2*D4*D8
"""

# Rows of S without the -1/sqrt(13) prefactor: entry (a, b) is zeta^a - zeta^b.
_S_PAIRS = (
    ((12, 1), (10, 3), (4, 9), (5, 8), (2, 11), (6, 7)),
    ((10, 3), (4, 9), (12, 1), (2, 11), (6, 7), (5, 8)),
    ((4, 9), (12, 1), (10, 3), (6, 7), (5, 8), (2, 11)),
    ((5, 8), (2, 11), (6, 7), (1, 12), (3, 10), (9, 4)),
    ((2, 11), (6, 7), (5, 8), (3, 10), (9, 4), (1, 12)),
    ((6, 7), (5, 8), (2, 11), (9, 4), (1, 12), (3, 10)),
)
_T_EXPONENTS = (7, 11, 8, 6, 2, 5)
_H_ROWS = (
    (0, 0, 0, 0, 0, 1),
    (0, 0, 0, 1, 0, 0),
    (0, 0, 0, 0, 1, 0),
    (0, 0, -1, 0, 0, 0),
    (-1, 0, 0, 0, 0, 0),
    (0, -1, 0, 0, 0, 0),
)
# H as a word in P = S T^-1 S and Q = S T^3, read left to right
H_WORD = (("Q", 5), ("P", 2), ("P", 2), ("Q", 6), ("P", 8), ("Q", 5), ("P", 2), ("P", 3), ("Q", 1))

# exponent pattern of zeta^nu in the quadratic combination, for A1..A6
W_PATTERN = (1, 4, 9, 3, 12, 10)

# cubic transformation law: which r-constant multiplies zeta^{j nu} D_j
D0_ROW_R = (1, 2, 1, 3, 2, 2, 4, 4, 1, 3, 4, 3)
DINF_ROW_R = ((-1, 3), (-1, 4), (-1, 3), (1, 1), (-1, 4), (-1, 4), (1, 2), (1, 2), (-1, 3), (1, 1), (1, 2), (1, 1))

_TERM_RE = re.compile(r"\s*([+-])?\s*([^+-]+)")


def parse_polynomial(text: str, nvars: int = NVARS, field=QQ, symbol: str = "z") -> SparsePolynomial:
    """Parse sums of terms like ``-2*z3*z4`` or ``z1^2``."""
    terms: dict[tuple, Fraction] = {}
    for sign, body in _TERM_RE.findall(text.replace(" ", "")):
        coef = Fraction(-1 if sign == "-" else 1)
        exps = [0] * nvars
        for factor in body.split("*"):
            if factor.startswith(symbol):
                name, _, power = factor.partition("^")
                exps[int(name[len(symbol):]) - 1] += int(power or 1)
            else:
                coef *= Fraction(factor)
        key = tuple(exps)
        terms[key] = terms.get(key, 0) + coef
    return SparsePolynomial(nvars, field, terms)


@dataclass(frozen=True)
class TableTerm:
    coef: int
    factors: tuple  # D indices (int or "inf"); None marks an unreadable factor
    text: str

    @property
    def defective(self) -> bool:
        return None in self.factors


@dataclass
class ParsedTable:
    terms: dict[int, list[TableTerm]]
    defects: list[dict] = field(default_factory=list)


def _d_index(token: str):
    if token == "Dinf":
        return INF
    if token.startswith("D") and token[1:].isdigit():
        return int(token[1:])
    return None


def parse_g_table(text: str) -> ParsedTable:
    """Parse a sextic table written in terms of the cubics D_j.

    A factor that is not a recognisable D symbol is recorded as a defect and
    its term is left out of the build.
    """
    out: dict[int, list[TableTerm]] = {}
    defects = []
    for line in text.strip().splitlines():
        head, _, body = line.partition(":")
        j = int(head.strip()[1:])
        terms = []
        for sign, chunk in _TERM_RE.findall(body.replace(" ", "")):
            coef = -1 if sign == "-" else 1
            factors = []
            for f in chunk.split("*"):
                if f[0].isdigit() and not f.startswith("D"):
                    coef *= int(f)
                    continue
                name, _, power = f.partition("^")
                idx = _d_index(name)
                factors.extend([idx] * int(power or 1))
            term = TableTerm(coef, tuple(factors), f"{'-' if coef < 0 else '+'}{chunk}")
            if term.defective:
                defects.append({"form": f"G{j}", "term": term.text, "reason": "factor without a D symbol"})
            terms.append(term)
        out[j] = terms
    return ParsedTable(out, defects)


# -- catalog --------------------------------------------------------------------------------


class FormCatalog:
    """Lazily built, cached collection of every matrix and form."""

    def __init__(self):
        self._cache: dict = {}

    def _memo(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    # matrices
    def matrix(self, name: str) -> SquareMatrix:
        name = name.upper() if name.lower() != "h_word" else "H_WORD"
        builders = {
            "S": self._build_s,
            "T": lambda: SquareMatrix.diag([zeta(k) for k in _T_EXPONENTS], CYC13),
            "H": lambda: SquareMatrix(CYC13, _H_ROWS),
            "P": lambda: self.matrix("S") @ self.matrix("T") ** -1 @ self.matrix("S"),
            "Q": lambda: self.matrix("S") @ self.matrix("T") ** 3,
            "H_WORD": self._build_h_word,
        }
        if name not in builders:
            raise FormIndexError(f"unknown matrix {name!r}; expected one of S, T, H, P, Q")
        return self._memo(("matrix", name), builders[name])

    def _build_s(self) -> SquareMatrix:
        pref = -(sqrt13_constant().inverse())
        rows = [[(zeta(a) - zeta(b)) * pref for a, b in row] for row in _S_PAIRS]
        return SquareMatrix(CYC13, rows)

    def _build_h_word(self) -> SquareMatrix:
        out = SquareMatrix.identity(NVARS, CYC13)
        for letter, k in H_WORD:
            out = out @ self.matrix(letter) ** k
        return out

    def st_power(self, nu: int) -> SquareMatrix:
        return self._memo(("st", nu % 13), lambda: self.matrix("S") @ self.matrix("T") ** (nu % 13))

    # forms
    def form(self, kind: str, index) -> SparsePolynomial:
        kind = kind.upper() if kind in ("a", "d", "g") else kind
        if kind in ("A", "D"):
            table = _A_TEXT if kind == "A" else _D_TEXT
            index = _normalize_index(index)
            if index not in table:
                raise FormIndexError(f"{kind}_{index} does not exist")
            return self._memo((kind, index), lambda: parse_polynomial(table[index]))
        if kind in ("G", "G_restated"):
            index = _normalize_index(index)
            if index not in range(13):
                raise FormIndexError(f"G_{index} does not exist")
            return self.g_forms(kind)[index]
        raise FormIndexError(f"unknown form family {kind!r}; expected A, D, G or G_restated")

    def g_table(self, kind: str = "G") -> ParsedTable:
        text = G_TABLE_PRIMARY if kind == "G" else G_TABLE_RESTATED
        return self._memo(("gtable", kind), lambda: parse_g_table(text))

    def g_forms(self, kind: str = "G") -> tuple[SparsePolynomial, ...]:
        def build():
            table = self.g_table(kind)
            out = []
            for j in range(13):
                total = SparsePolynomial.zero(NVARS, QQ)
                for term in table.terms[j]:
                    if term.defective:
                        continue
                    total = total + self.d_product(term.factors) * term.coef
                out.append(total)
            return tuple(out)

        return self._memo(("gforms", kind), build)

    def d_product(self, factors: Sequence) -> SparsePolynomial:
        key = tuple(sorted(factors, key=str))
        return self._memo(("dprod", key), lambda: _product(self.form("D", i) for i in key))

    # families
    def w_family(self) -> tuple[SparsePolynomial, ...]:
        def build():
            a = [self.form("A", j).change_field(CYC13) for j in range(7)]
            out = []
            for nu in range(13):
                phi = a[0]
                for j, e in enumerate(W_PATTERN, start=1):
                    phi = phi + a[j] * zeta(e * nu)
                out.append(phi * phi)
            out.append(a[0] * a[0] * 13)
            return tuple(out)

        return self._memo("w", build)

    def linear_roots(self) -> tuple[SparsePolynomial, ...]:
        """phi_nu = sqrt(13) * (A_0 o S T^nu) for nu = 0..12, then phi_inf = sqrt(13) A_0."""

        def build():
            a0 = self.form("A", 0).change_field(CYC13)
            s13 = sqrt13_constant()
            out = [substitute_linear(a0, self.st_power(nu)) * s13 for nu in range(13)]
            out.append(a0 * s13)
            return tuple(out)

        return self._memo("phi", build)

    def delta_family(self) -> tuple[SparsePolynomial, ...]:
        def build():
            g = [p.change_field(CYC13) for p in self.g_forms("G")]
            out = []
            for nu in range(13):
                d = g[0] * -13
                for j in range(1, 13):
                    d = d + g[j] * zeta(j * nu)
                out.append(d)
            out.append(g[0] * 169)
            return tuple(out)

        return self._memo("delta", build)

    def root_family(self, kind: str) -> tuple[SparsePolynomial, ...]:
        if kind == "w":
            return self.w_family()
        if kind in ("delta", "d"):
            return self.delta_family()
        raise FormIndexError(f"unknown root family {kind!r}; expected w or delta")

    def integer_parts(self, kind: str) -> tuple[SparsePolynomial, ...]:
        """Rational polynomials c_0..c_12 with family_nu = c_0 + sum_j zeta^{j nu} c_j."""

        def build():
            if kind == "delta":
                g = self.g_forms("G")
                return (g[0] * -13,) + tuple(g[1:])
            a = [self.form("A", j) for j in range(7)]
            parts = [SparsePolynomial.zero(NVARS, QQ) for _ in range(13)]
            coeffs = [(0, a[0])] + list(zip(W_PATTERN, a[1:]))
            for e1, p1 in coeffs:
                for e2, p2 in coeffs:
                    parts[(e1 + e2) % 13] = parts[(e1 + e2) % 13] + p1 * p2
            return tuple(parts)

        return self._memo(("parts", kind), build)

    def invariant(self, label) -> "InvariantForm":
        label = normalize_label(label)
        return INVARIANTS[label]

    def icosahedral(self) -> tuple[SparsePolynomial, SparsePolynomial, SparsePolynomial]:
        return self._memo("ico", icosahedral_forms)


def _normalize_index(index):
    if isinstance(index, str):
        s = index.strip().lower()
        if s in ("inf", "infinity", "oo", "∞"):
            return INF
        if s.isdigit():
            return int(s)
        raise FormIndexError(f"bad form index {index!r}")
    return index


def _product(polys) -> SparsePolynomial:
    out = SparsePolynomial.constant(NVARS, 1, QQ)
    for p in polys:
        out = out * p
    return out


@functools.cache
def catalog() -> FormCatalog:
    return FormCatalog()


def generator_matrix(name: str) -> SquareMatrix:
    """S, T, H (explicit signed permutation), P, Q or H_word."""
    return catalog().matrix(name)


def h_word_scalar() -> FieldElement | None:
    """c with (word in P, Q) = c * H, or None if they are not proportional."""
    cat = catalog()
    return cat.matrix("H_WORD").scalar_multiple_of(cat.matrix("H"))


def build_form(kind: str, index) -> SparsePolynomial:
    """A_j, D_j (j may be 'inf'), G_j from the primary table or G_restated."""
    return catalog().form(kind, index)


def build_root_family(kind: str) -> tuple[SparsePolynomial, ...]:
    """w or delta family ordered nu = 0..12, then infinity."""
    return catalog().root_family(kind)


def g_table_diff() -> dict:
    """Compare the two printings of the sextic table.

    Returns per-index differences: the printed terms present in only one table
    and the exact polynomial difference of the two builds.
    """
    cat = catalog()
    ta, tb = cat.g_table("G"), cat.g_table("G_restated")
    ga, gb = cat.g_forms("G"), cat.g_forms("G_restated")
    diffs = {}
    for j in range(13):
        poly_diff = ga[j] - gb[j]
        sa = {(t.coef, tuple(sorted(map(str, t.factors)))) for t in ta.terms[j] if not t.defective}
        sb = {(t.coef, tuple(sorted(map(str, t.factors)))) for t in tb.terms[j] if not t.defective}
        if poly_diff.is_zero() and sa == sb:
            continue
        only_a = [t.text for t in ta.terms[j] if (t.coef, tuple(sorted(map(str, t.factors)))) not in sb]
        only_b = [t.text for t in tb.terms[j] if t.defective or (t.coef, tuple(sorted(map(str, t.factors)))) not in sa]
        diffs[j] = {"only_primary": only_a, "only_restated": only_b, "difference": poly_diff}
    return {"diffs": diffs, "defects": tb.defects + ta.defects}


# -- invariants -------------------------------------------------------------------------------


@dataclass(frozen=True)
class InvariantForm:
    """c_1 * (power sum of a root family) [+ c_2 * (another power sum)].

    ``parts`` holds (constant, family, power) triples.  The symbolic
    expansion is produced on request only; evaluation and series
    substitution go through the families.
    """

    label: str
    parts: tuple

    @property
    def degree(self) -> int:
        fam, k = self.parts[0][1], self.parts[0][2]
        return k * (4 if fam == "w" else 6)

    def expand(self, heavy: bool = False) -> SparsePolynomial:
        if self.degree > 16 and not heavy:
            raise BudgetExceededError(
                f"Phi_{self.label} has degree {self.degree}; symbolic expansion beyond degree 16 "
                "needs heavy mode, use evaluation-based checks instead"
            )
        return _expand_invariant(self)

    def evaluate(self, point: Sequence | "FamilyEvaluator") -> FieldElement:
        """Exact value at a point via the root families."""
        ev = point if isinstance(point, FamilyEvaluator) else FamilyEvaluator(point)
        return ev.invariant(self)

    def substitute_series(self, xs):
        from .qseries import substitute_series

        cat = catalog()
        total = None
        for c, fam, k in self.parts:
            vals = [substitute_series(f, xs) for f in cat.root_family(fam)]
            s = None
            for v in vals:
                t = v**k
                s = t if s is None else s + t
            s = s.scale(c)
            total = s if total is None else total + s
        return total


def _cmul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * 13
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[(i + j) % 13] += x * y
    return out


def _rotate(v: list[int], k: int) -> list[int]:
    k %= 13
    return v[-k:] + v[:-k] if k else list(v)


class FamilyEvaluator:
    """Exact values of the root families and invariants at one point.

    The point is scaled to integral coordinates in Z[t]/(t^13 - 1), where
    multiplying by zeta^k is a rotation; monomial values are shared by every
    polynomial evaluated here.  Values are returned as FieldElements of the
    unscaled point.
    """

    def __init__(self, point: Sequence):
        if len(point) != NVARS:
            raise ValueError(f"point needs {NVARS} coordinates")
        elems = [x if isinstance(x, FieldElement) and x.spec == CYC13 else CYC13(
            x.to_fraction() if isinstance(x, FieldElement) else x) for x in point]
        scale = 1
        for e in elems:
            scale = scale * e.den // gcd(scale, e.den)
        self.scale = scale
        self.y = [[int(c) * (scale // e.den) for c in e.num] + [0] for e in elems]
        self._mono: dict[tuple, list[int]] = {(0,) * NVARS: [1] + [0] * 12}
        self._fam: dict[str, list[list[int]]] = {}

    def monomial(self, exps: tuple) -> list[int]:
        got = self._mono.get(exps)
        if got is None:
            last = max(i for i, e in enumerate(exps) if e)
            prev = exps[:last] + (exps[last] - 1,) + exps[last + 1:]
            got = _cmul(self.monomial(prev), self.y[last])
            self._mono[exps] = got
        return got

    def scaled_value(self, p: SparsePolynomial) -> list[int]:
        """p at the integral scaled point, for p with integer coefficients."""
        out = [0] * 13
        for e, c in p.terms.items():
            if c.den != 1:
                raise ValueError("scaled_value needs integer coefficients")
            m = self.monomial(e)
            for k, cc in enumerate(c.num):
                if cc:
                    for i, x in enumerate(m):
                        if x:
                            out[(i + k) % 13] += cc * x
        return out

    def family(self, kind: str) -> list[list[int]]:
        """The fourteen family members at the scaled point (nu = 0..12, inf)."""
        if kind not in self._fam:
            cat = catalog()
            parts = [self.scaled_value(c) for c in cat.integer_parts(kind)]
            vals = []
            for nu in range(13):
                acc = [0] * 13
                for j, v in enumerate(parts):
                    for i, x in enumerate(_rotate(v, j * nu)):
                        acc[i] += x
                vals.append(acc)
            if kind == "w":
                a0 = self.scaled_value(cat.form("A", 0))
                vals.append([13 * x for x in _cmul(a0, a0)])
            else:
                vals.append([169 * x for x in self.scaled_value(cat.form("G", 0))])
            self._fam[kind] = vals
        return self._fam[kind]

    def element(self, v: list[int], degree: int) -> FieldElement:
        """The FieldElement of a scaled value of a form of the given degree."""
        return FieldElement._make(CYC13, [x - v[12] for x in v[:12]], self.scale**degree)

    def family_values(self, kind: str) -> list[FieldElement]:
        deg = 4 if kind == "w" else 6
        return [self.element(v, deg) for v in self.family(kind)]

    def power_sum(self, kind: str, k: int) -> list[int]:
        acc = [0] * 13
        for v in self.family(kind):
            p = v
            for _ in range(k - 1):
                p = _cmul(p, v)
            acc = [x + y for x, y in zip(acc, p)]
        return acc

    def invariant(self, inv: "InvariantForm") -> FieldElement:
        total = CYC13.zero
        for c, fam, k in inv.parts:
            deg = k * (4 if fam == "w" else 6)
            total = total + self.element(self.power_sum(fam, k), deg) * c
        return total


@functools.cache
def _expand_invariant(inv: InvariantForm) -> SparsePolynomial:
    cat = catalog()
    total = SparsePolynomial.zero(NVARS, CYC13)
    for c, fam, k in inv.parts:
        total = total + power_sum(cat.root_family(fam), k) * c
    return total


INVARIANTS = {
    "4": InvariantForm("4", ((Fraction(1), "w", 1),)),
    "8": InvariantForm("8", ((Fraction(1), "w", 2),)),
    "12": InvariantForm("12", ((Fraction(-1, 13 * 52), "delta", 2),)),
    "12'": InvariantForm("12'", ((Fraction(-1, 13 * 30), "w", 3),)),
    "16": InvariantForm("16", ((Fraction(1), "w", 4),)),
    "18": InvariantForm("18", ((Fraction(1, 13 * 6), "delta", 3),)),
    "20": InvariantForm("20", ((Fraction(1, 13 * 25), "w", 5),)),
    "30": InvariantForm("30", ((Fraction(-1, 13 * 1315), "delta", 5),)),
    "phi12": InvariantForm("phi12", ((Fraction(-1, 13 * 52), "delta", 2), (Fraction(1, 13 * 30), "w", 3))),
}
INVARIANT_LABELS = tuple(INVARIANTS)


def normalize_label(label) -> str:
    s = str(label).strip()
    s = s.replace("Phi", "").replace("phi_", "phi").replace("_", "").replace("′", "'")
    if s.lower() == "phi12" or s == "12phi":
        return "phi12"
    if s.lower().startswith("phi") and s[3:] in INVARIANTS:
        s = s[3:]
    if s.endswith("p") and s[:-1] == "12":
        s = "12'"
    if s not in INVARIANTS:
        raise FormIndexError(f"unknown invariant {label!r}; expected one of {', '.join(INVARIANTS)}")
    return s


def invariant_poly(label, heavy: bool = False) -> InvariantForm:
    """The invariant with its normalising constant; expand() gives the polynomial."""
    return catalog().invariant(label)


# -- cubic transformation law -----------------------------------------------------------------


def d_transform_rhs(rc: RConstants, nu: int, row: str) -> SparsePolynomial:
    """Right-hand side of the cubic law for -13 sqrt(13) (D o S T^nu)."""
    cat = catalog()
    d = {j: cat.form("D", j).change_field(CYC13) for j in list(range(13)) + [INF]}
    r = {1: rc.r1, 2: rc.r2, 3: rc.r3, 4: rc.r4}
    if row == "D0":
        total = d[0] * rc.r0 + d[INF] * rc.rinf
        for j in range(1, 13):
            total = total + d[j] * (r[D0_ROW_R[j - 1]] * zeta(j * nu))
    elif row == "Dinf":
        total = d[0] * rc.rinf - d[INF] * rc.r0
        for j in range(1, 13):
            sign, k = DINF_ROW_R[j - 1]
            total = total + d[j] * (r[k] * zeta(j * nu) * sign)
    else:
        raise FormIndexError(f"unknown cubic row {row!r}")
    return total


def d_transform_lhs(nu: int, row: str) -> SparsePolynomial:
    cat = catalog()

    def build():
        idx = 0 if row == "D0" else INF
        base = cat.form("D", idx).change_field(CYC13)
        return substitute_linear(base, cat.st_power(nu)) * (sqrt13_constant() * -13)

    return cat._memo(("dlhs", row, nu % 13), build)


def d_transform_residuals(rc: RConstants, nus: Sequence[int] = range(13)) -> list[tuple[int, str, int]]:
    """(nu, row, number of mismatching terms) for every failing instance."""
    bad = []
    for nu in nus:
        for row in ("D0", "Dinf"):
            diff = d_transform_lhs(nu, row) - d_transform_rhs(rc, nu, row)
            if not diff.is_zero():
                bad.append((nu, row, len(diff)))
    return bad


def d_transform_holds(rc: RConstants) -> bool:
    # cheap screen at nu = 0 before the full sweep
    if d_transform_residuals(rc, [0]):
        return False
    return not d_transform_residuals(rc)


# -- binary icosahedral forms -------------------------------------------------------------------

_ICO_F = "z1^11*z2 + 11*z1^6*z2^6 - z1*z2^11"
_ICO_H = "-z1^20 - z2^20 + 228*z1^15*z2^5 - 228*z1^5*z2^15 - 494*z1^10*z2^10"
_ICO_T = (
    "z1^30 + z2^30 + 522*z1^25*z2^5 - 522*z1^5*z2^25 - 10005*z1^20*z2^10 - 10005*z1^10*z2^20"
)


def icosahedral_forms() -> tuple[SparsePolynomial, SparsePolynomial, SparsePolynomial]:
    """f, H, T in two variables with integer coefficients, as printed."""
    return tuple(parse_polynomial(t, nvars=2) for t in (_ICO_F, _ICO_H, _ICO_T))


def hessian(f: SparsePolynomial) -> SparsePolynomial:
    fx, fy = f.derivative(1), f.derivative(2)
    return fx.derivative(1) * fy.derivative(2) - fx.derivative(2) * fy.derivative(1)


def jacobian(f: SparsePolynomial, g: SparsePolynomial) -> SparsePolynomial:
    return f.derivative(1) * g.derivative(2) - f.derivative(2) * g.derivative(1)


# -- classical varieties in P^4 ----------------------------------------------------------------------


def classical_varieties(name: str, lam=None, mu=None) -> list[SparsePolynomial]:
    """Defining polynomials in x_0..x_4 (variables z1..z5).

    bring: power sums p1, p2, p3.  fricke: p1, p2, p4.
    quintic_pencil: sigma_1 and lam*sigma_2*sigma_3 + mu*sigma_5.
    """
    if name == "bring":
        return [power_sum_poly(5, k) for k in (1, 2, 3)]
    if name == "fricke":
        return [power_sum_poly(5, k) for k in (1, 2, 4)]
    if name == "quintic_pencil":
        if lam is None or mu is None:
            raise FormIndexError("quintic_pencil needs lam and mu")
        s = [None] + [elementary_symmetric(5, k) for k in range(1, 6)]
        return [s[1], s[2] * s[3] * Fraction(lam) + s[5] * Fraction(mu)]
    raise FormIndexError(f"unknown variety {name!r}; expected bring, fricke or quintic_pencil")
