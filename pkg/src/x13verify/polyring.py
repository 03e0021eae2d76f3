"""Sparse multivariate polynomials and square matrices over number fields.

A polynomial is a map from exponent tuples to nonzero FieldElements.  Small
operations run on Python dicts.  Large products and large linear
substitutions over Q or Q(zeta_13) are routed through the multimodular
kernels; the dict code remains the reference implementation and both paths
are compared in the test-suite.
"""

from __future__ import annotations

import functools
import itertools
import math
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import _kernels, _multimod
from .cycfield import QQ, FieldElement, FieldMismatchError, FieldSpec, format_element

# products with at least this many term pairs use the modular kernel
KERNEL_PAIR_THRESHOLD = 4096
# homogeneous polynomials with at least this many terms substitute via the kernel
KERNEL_SUBST_THRESHOLD = 60


class RingMismatchError(ValueError):
    """Polynomials from different rings were combined."""


Monomial = tuple[int, ...]


def _coerce_scalar(field: FieldSpec, c) -> FieldElement:
    if isinstance(c, FieldElement):
        if c.spec == field:
            return c
        if c.is_rational():
            return field(c.to_fraction())
        raise FieldMismatchError(f"{c.spec.name} coefficient in a polynomial over {field.name}")
    return field(c)


class SparsePolynomial:
    """Polynomial in ``nvars`` variables z_1..z_n with coefficients in ``field``."""

    __slots__ = ("nvars", "field", "_terms", "__weakref__")

    def __init__(self, nvars: int, field: FieldSpec, terms: Mapping[Monomial, object] | None = None):
        self.nvars = nvars
        self.field = field
        clean: dict[Monomial, FieldElement] = {}
        for exps, c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != nvars or min(exps, default=0) < 0:
                raise ValueError(f"bad exponent vector {exps} for {nvars} variables")
            c = _coerce_scalar(field, c)
            if c:
                if exps in clean:
                    c = clean[exps] + c
                    if not c:
                        del clean[exps]
                        continue
                clean[exps] = c
        self._terms = clean

    @classmethod
    def _raw(cls, nvars: int, field: FieldSpec, terms: dict) -> "SparsePolynomial":
        obj = object.__new__(cls)
        obj.nvars, obj.field, obj._terms = nvars, field, terms
        return obj

    # -- constructors -------------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int, field: FieldSpec = QQ) -> "SparsePolynomial":
        return cls._raw(nvars, field, {})

    @classmethod
    def constant(cls, nvars: int, c, field: FieldSpec = QQ) -> "SparsePolynomial":
        return cls(nvars, field, {(0,) * nvars: c})

    @classmethod
    def variable(cls, i: int, nvars: int, field: FieldSpec = QQ) -> "SparsePolynomial":
        """The variable z_i, numbered from 1."""
        if not 1 <= i <= nvars:
            raise IndexError(f"variable index {i} outside 1..{nvars}")
        exps = [0] * nvars
        exps[i - 1] = 1
        return cls._raw(nvars, field, {tuple(exps): field.one})

    @classmethod
    def monomial(cls, exps: Sequence[int], c=1, field: FieldSpec = QQ) -> "SparsePolynomial":
        return cls(len(exps), field, {tuple(exps): c})

    # -- views ----------------------------------------------------------------------

    @property
    def terms(self) -> Mapping[Monomial, FieldElement]:
        return self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self._terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self._terms}) <= 1

    def coefficient(self, exps: Sequence[int]) -> FieldElement:
        return self._terms.get(tuple(exps), self.field.zero)

    def sorted_terms(self) -> list[tuple[Monomial, FieldElement]]:
        """Terms in descending graded-lexicographic order."""
        return sorted(self._terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def is_rational(self) -> bool:
        return all(c.is_rational() for c in self._terms.values())

    def change_field(self, field: FieldSpec) -> "SparsePolynomial":
        """Move a polynomial with rational coefficients into another field."""
        if field == self.field:
            return self
        return SparsePolynomial(self.nvars, field, self._terms)

    def map_coefficients(self, fn) -> "SparsePolynomial":
        return SparsePolynomial(self.nvars, self.field, {e: fn(c) for e, c in self._terms.items()})

    def __repr__(self) -> str:
        return f"SparsePolynomial({self.nvars}, {self.field.name}, {format_polynomial(self)})"

    # -- arithmetic -------------------------------------------------------------------

    def _check(self, other: "SparsePolynomial") -> None:
        if self.nvars != other.nvars:
            raise RingMismatchError(f"{self.nvars} vs {other.nvars} variables")
        if self.field != other.field:
            raise RingMismatchError(f"coefficients in {self.field.name} vs {other.field.name}")

    def _lift(self, other) -> "SparsePolynomial":
        if isinstance(other, SparsePolynomial):
            if other.field != self.field and other.nvars == self.nvars and other.is_rational():
                other = other.change_field(self.field)
            self._check(other)
            return other
        return SparsePolynomial.constant(self.nvars, _coerce_scalar(self.field, other), self.field)

    def __add__(self, other) -> "SparsePolynomial":
        other = self._lift(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            if e in out:
                s = out[e] + c
                if s:
                    out[e] = s
                else:
                    del out[e]
            else:
                out[e] = c
        return SparsePolynomial._raw(self.nvars, self.field, out)

    __radd__ = __add__

    def __neg__(self) -> "SparsePolynomial":
        return SparsePolynomial._raw(self.nvars, self.field, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> "SparsePolynomial":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "SparsePolynomial":
        return (-self) + other

    def scale(self, c) -> "SparsePolynomial":
        c = _coerce_scalar(self.field, c)
        if not c:
            return SparsePolynomial.zero(self.nvars, self.field)
        return SparsePolynomial._raw(self.nvars, self.field, {e: v * c for e, v in self._terms.items()})

    def __mul__(self, other) -> "SparsePolynomial":
        if not isinstance(other, SparsePolynomial):
            return self.scale(other)
        return _multiply(self, self._lift(other))

    def __rmul__(self, other) -> "SparsePolynomial":
        return self.scale(other)

    def __pow__(self, k: int) -> "SparsePolynomial":
        return poly_pow(self, k)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, FieldElement)):
            other = SparsePolynomial.constant(self.nvars, other, self.field)
        if not isinstance(other, SparsePolynomial):
            return NotImplemented
        if self.nvars != other.nvars:
            return False
        if self.field != other.field:
            if not (self.is_rational() and other.is_rational()):
                return False
        return self._terms == other._terms if self.field == other.field else (
            {e: c.to_fraction() for e, c in self._terms.items()}
            == {e: c.to_fraction() for e, c in other._terms.items()}
        )

    __hash__ = None

    # -- calculus and evaluation ----------------------------------------------------------

    def derivative(self, i: int) -> "SparsePolynomial":
        """Partial derivative with respect to z_i (1-based)."""
        k = i - 1
        out = {}
        for e, c in self._terms.items():
            if e[k]:
                ne = list(e)
                ne[k] -= 1
                out[tuple(ne)] = c * e[k]
        return SparsePolynomial._raw(self.nvars, self.field, out)

    def __call__(self, *point) -> FieldElement:
        return evaluate(self, point)

    # -- serialization ---------------------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "vars": self.nvars,
            "terms": [{"exps": list(e), "coeff": c.to_json()} for e, c in self.sorted_terms()],
        }

    @classmethod
    def from_json(cls, data: dict, field: FieldSpec) -> "SparsePolynomial":
        return cls(
            data["vars"],
            field,
            {tuple(t["exps"]): FieldElement.from_json(field, t["coeff"]) for t in data["terms"]},
        )


def format_polynomial(p: SparsePolynomial, limit: int = 12) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for e, c in p.sorted_terms()[:limit]:
        mono = "*".join(
            (f"z{i + 1}" if k == 1 else f"z{i + 1}^{k}") for i, k in enumerate(e) if k
        )
        cs = format_element(c)
        if not mono:
            parts.append(f"({cs})")
        elif cs == "1":
            parts.append(mono)
        else:
            parts.append(f"({cs})*{mono}")
    more = f" + ... ({len(p)} terms)" if len(p) > limit else ""
    return " + ".join(parts) + more


# -- integer-coordinate views for the kernels ----------------------------------------------


def _integer_coords(p: SparsePolynomial) -> tuple[list[Monomial], np.ndarray, int]:
    exps = list(p.terms)
    den = math.lcm(1, *(c.den for c in p.terms.values()))
    rows = [[n * (den // c.den) for n in c.num] for c in p.terms.values()]
    arr = np.empty((len(rows), p.field.degree), dtype=object)
    if rows:
        arr[:, :] = rows
    return exps, arr, den


def _from_integer_coords(nvars, field, exps, coords: np.ndarray, den: int) -> SparsePolynomial:
    out = {}
    for e, row in zip(exps, coords.tolist()):
        if any(row):
            out[e] = FieldElement._make(field, [int(x) for x in row], den)
    return SparsePolynomial._raw(nvars, field, out)


def _multiply(a: SparsePolynomial, b: SparsePolynomial) -> SparsePolynomial:
    if a.is_zero() or b.is_zero():
        return SparsePolynomial.zero(a.nvars, a.field)
    if len(a) * len(b) >= KERNEL_PAIR_THRESHOLD and _multimod.supports(a.field):
        res = _multiply_kernel(a, b)
        if res is not None:
            return res
    return multiply_reference(a, b)


def multiply_reference(a: SparsePolynomial, b: SparsePolynomial) -> SparsePolynomial:
    """Schoolbook product accumulated in a dict."""
    a._check(b)
    out: dict[Monomial, FieldElement] = {}
    bt = list(b.terms.items())
    for ea, ca in a.terms.items():
        for eb, cb in bt:
            e = tuple(x + y for x, y in zip(ea, eb))
            v = ca * cb
            if e in out:
                out[e] = out[e] + v
            else:
                out[e] = v
    return SparsePolynomial._raw(a.nvars, a.field, {e: c for e, c in out.items() if c})


def _multiply_kernel(a: SparsePolynomial, b: SparsePolynomial) -> SparsePolynomial | None:
    n = a.nvars
    maxe = [0] * n
    for p in (a, b):
        col = [max(e[i] for e in p.terms) for i in range(n)]
        maxe = [x + y for x, y in zip(maxe, col)]
    width = max(1, max(maxe).bit_length())
    if width * n > 62:
        return None
    ea, ca, da = _integer_coords(a)
    eb, cb, db = _integer_coords(b)

    def pack(exps):
        keys = np.zeros(len(exps), dtype=np.int64)
        arr = np.array(exps, dtype=np.int64)
        for i in range(n):
            keys = (keys << width) | arr[:, i]
        return keys

    dmax = a.degree + b.degree
    if a.is_homogeneous() and b.is_homogeneous():
        cap = math.comb(dmax + n - 1, n - 1)
    else:
        cap = math.comb(dmax + n, n)
    keys, coords = _multimod.exact_sparse_product(pack(ea), ca, pack(eb), cb, cap, a.field)
    fieldmask = (1 << width) - 1
    exps = [tuple((int(k) >> (width * (n - 1 - i))) & fieldmask for i in range(n)) for k in keys]
    return _from_integer_coords(n, a.field, exps, coords, da * db)


def poly_arith(a: SparsePolynomial, b: SparsePolynomial, op: str) -> SparsePolynomial:
    if not isinstance(a, SparsePolynomial) or not isinstance(b, SparsePolynomial):
        raise TypeError("poly_arith expects SparsePolynomial operands")
    a._check(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown polynomial operation {op!r}")


def poly_pow(a: SparsePolynomial, k: int) -> SparsePolynomial:
    """a**k by square-and-multiply."""
    if k < 0:
        raise ValueError("negative powers are not polynomials")
    result = SparsePolynomial.constant(a.nvars, 1, a.field)
    base = a
    while k:
        if k & 1:
            result = result * base
        k >>= 1
        if k:
            base = base * base
    return result


def power_sum(family: Sequence[SparsePolynomial], k: int) -> SparsePolynomial:
    """sum of f**k over the family."""
    if not family:
        raise ValueError("power_sum needs a non-empty family")
    if k < 1:
        raise ValueError("power_sum needs k >= 1")
    total = SparsePolynomial.zero(family[0].nvars, family[0].field)
    for f in family:
        total = total + poly_pow(f, k)
    return total


def evaluate(p: SparsePolynomial, point: Sequence) -> FieldElement:
    """Exact value of p at a point (entries coerced into the coefficient field)."""
    if len(point) != p.nvars:
        raise ValueError(f"point has {len(point)} entries, polynomial has {p.nvars} variables")
    field = p.field
    vals = [_coerce_point(field, x) for x in point]
    if field.degree == 1:
        # plain rational arithmetic is much faster than FieldElement here
        fr = [v.to_fraction() for v in vals]
        dens = [f.denominator for f in fr]
        if all(d == 1 for d in dens):
            ints = [f.numerator for f in fr]
            pw = [_power_table(x, p, i) for i, x in enumerate(ints)]
            total = Fraction(0)
            for e, c in p.terms.items():
                m = 1
                for i, k in enumerate(e):
                    if k:
                        m *= pw[i][k]
                total += c.to_fraction() * m
            return field(total)
    pw = [_power_table(v, p, i) for i, v in enumerate(vals)]
    total = field.zero
    for e, c in p.terms.items():
        m = c
        for i, k in enumerate(e):
            if k:
                m = m * pw[i][k]
        total = total + m
    return total


def _coerce_point(field: FieldSpec, x) -> FieldElement:
    if isinstance(x, FieldElement):
        return _coerce_scalar(field, x)
    return field(x)


def _power_table(x, p: SparsePolynomial, i: int) -> list:
    top = max((e[i] for e in p.terms), default=0)
    out = [1]
    for _ in range(top):
        out.append(out[-1] * x)
    return out


# -- square matrices -------------------------------------------------------------------------


class SquareMatrix:
    """n x n matrix of FieldElements sharing one field."""

    __slots__ = ("field", "n", "rows")

    def __init__(self, field: FieldSpec, rows: Sequence[Sequence]):
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise ValueError("SquareMatrix needs a non-empty square array")
        self.field = field
        self.n = n
        self.rows = tuple(tuple(_coerce_scalar(field, x) for x in r) for r in rows)

    @classmethod
    def identity(cls, n: int, field: FieldSpec) -> "SquareMatrix":
        return cls(field, [[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def diag(cls, entries: Sequence, field: FieldSpec) -> "SquareMatrix":
        n = len(entries)
        return cls(field, [[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    def __getitem__(self, ij) -> FieldElement:
        i, j = ij
        return self.rows[i][j]

    def __matmul__(self, other: "SquareMatrix") -> "SquareMatrix":
        if not isinstance(other, SquareMatrix):
            return NotImplemented
        if other.n != self.n or other.field != self.field:
            raise RingMismatchError("matrix shapes or fields differ")
        cols = list(zip(*other.rows))
        zero = self.field.zero
        out = []
        for r in self.rows:
            row = []
            for c in cols:
                acc = zero
                for x, y in zip(r, c):
                    if x and y:
                        acc = acc + x * y
                row.append(acc)
            out.append(row)
        return SquareMatrix(self.field, out)

    def __mul__(self, c) -> "SquareMatrix":
        c = _coerce_scalar(self.field, c)
        return SquareMatrix(self.field, [[x * c for x in r] for r in self.rows])

    __rmul__ = __mul__

    def __neg__(self) -> "SquareMatrix":
        return self * -1

    def __add__(self, other: "SquareMatrix") -> "SquareMatrix":
        return SquareMatrix(self.field, [[x + y for x, y in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other: "SquareMatrix") -> "SquareMatrix":
        return self + (-other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SquareMatrix):
            return NotImplemented
        return self.field == other.field and self.rows == other.rows

    __hash__ = None

    def __pow__(self, k: int) -> "SquareMatrix":
        if k < 0:
            return self.inverse() ** (-k)
        result = SquareMatrix.identity(self.n, self.field)
        base = self
        while k:
            if k & 1:
                result = result @ base
            k >>= 1
            if k:
                base = base @ base
        return result

    def inverse(self) -> "SquareMatrix":
        n = self.n
        aug = [list(r) + [self.field(int(i == j)) for j in range(n)] for i, r in enumerate(self.rows)]
        for col in range(n):
            piv = next((r for r in range(col, n) if aug[r][col]), None)
            if piv is None:
                raise ZeroDivisionError("singular matrix")
            aug[col], aug[piv] = aug[piv], aug[col]
            inv = aug[col][col].inverse()
            aug[col] = [x * inv for x in aug[col]]
            for r in range(n):
                if r != col and aug[r][col]:
                    f = aug[r][col]
                    aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
        return SquareMatrix(self.field, [row[n:] for row in aug])

    def scalar_multiple_of(self, other: "SquareMatrix") -> FieldElement | None:
        """c with self == c * other, or None."""
        c = None
        for r, s in zip(self.rows, other.rows):
            for x, y in zip(r, s):
                if y:
                    q = x / y
                    if c is None:
                        c = q
                    elif q != c:
                        return None
                elif x:
                    return None
        return c

    def scalar(self) -> FieldElement | None:
        """c when the matrix equals c * I, else None."""
        return self.scalar_multiple_of(SquareMatrix.identity(self.n, self.field))

    def is_diagonal(self) -> bool:
        return all(not x for i, r in enumerate(self.rows) for j, x in enumerate(r) if i != j)

    def is_monomial(self) -> bool:
        """Exactly one nonzero entry in every row and every column."""
        rows_ok = all(sum(1 for x in r if x) == 1 for r in self.rows)
        cols_ok = all(sum(1 for x in c if x) == 1 for c in zip(*self.rows))
        return rows_ok and cols_ok

    def apply(self, vec: Sequence) -> list[FieldElement]:
        """Matrix-vector product M.x."""
        vals = [_coerce_point(self.field, x) for x in vec]
        out = []
        for r in self.rows:
            acc = self.field.zero
            for a, x in zip(r, vals):
                if a:
                    acc = acc + a * x
            out.append(acc)
        return out

    def to_json(self) -> list[list[list[str]]]:
        return [[x.to_json() for x in r] for r in self.rows]

    def __repr__(self) -> str:
        body = "; ".join(", ".join(format_element(x) for x in r) for r in self.rows)
        return f"SquareMatrix({self.field.name}, [{body}])"


# -- linear substitution ------------------------------------------------------------------------


def substitute_linear(p: SparsePolynomial, m: SquareMatrix) -> SparsePolynomial:
    """p o M: every z_i becomes the linear form sum_j M[i][j] z_j."""
    if m.n != p.nvars:
        raise ValueError(f"{m.n}x{m.n} matrix acting on {p.nvars} variables")
    if m.field != p.field:
        if p.is_rational():
            p = p.change_field(m.field)
        else:
            raise FieldMismatchError(f"matrix over {m.field.name}, polynomial over {p.field.name}")
    if p.is_zero():
        return p
    if m.is_monomial():
        return _substitute_monomial_matrix(p, m)
    if (
        len(p) >= KERNEL_SUBST_THRESHOLD
        and p.is_homogeneous()
        and _multimod.supports(p.field)
    ):
        res = _substitute_kernel(p, m)
        if res is not None:
            return res
    return substitute_reference(p, m)


def _substitute_monomial_matrix(p: SparsePolynomial, m: SquareMatrix) -> SparsePolynomial:
    # z_i -> c_i z_{pi(i)}
    n = p.nvars
    target = []
    for r in m.rows:
        j = next(k for k, x in enumerate(r) if x)
        target.append((j, r[j]))
    pw = [[p.field.one] for _ in range(n)]
    out = {}
    for e, c in p.terms.items():
        ne = [0] * n
        coef = c
        for i, k in enumerate(e):
            if k:
                j, a = target[i]
                ne[j] += k
                while len(pw[i]) <= k:
                    pw[i].append(pw[i][-1] * a)
                coef = coef * pw[i][k]
        out[tuple(ne)] = coef
    return SparsePolynomial._raw(n, p.field, out)


def substitute_reference(p: SparsePolynomial, m: SquareMatrix) -> SparsePolynomial:
    """Expand products of powers of the linear forms, memoising prefixes."""
    n = p.nvars
    field = p.field
    forms = [
        SparsePolynomial(n, field, {tuple(int(k == j) for k in range(n)): x for j, x in enumerate(r) if x})
        for r in m.rows
    ]
    powers = [[SparsePolynomial.constant(n, 1, field)] for _ in range(n)]

    def lpow(i, k):
        while len(powers[i]) <= k:
            powers[i].append(multiply_reference(powers[i][-1], forms[i]))
        return powers[i][k]

    prefix_cache: dict[Monomial, SparsePolynomial] = {(): SparsePolynomial.constant(n, 1, field)}

    def prefix(e: Monomial) -> SparsePolynomial:
        if e in prefix_cache:
            return prefix_cache[e]
        head = prefix(e[:-1])
        k = e[-1]
        val = head if k == 0 else multiply_reference(head, lpow(len(e) - 1, k))
        prefix_cache[e] = val
        return val

    total: dict[Monomial, FieldElement] = {}
    for e, c in sorted(p.terms.items()):
        # drop trailing zero exponents so shared prefixes are reused
        last = max((i for i, k in enumerate(e) if k), default=-1)
        poly = prefix(e[: last + 1])
        for ee, v in poly.terms.items():
            w = v * c
            if ee in total:
                total[ee] = total[ee] + w
            else:
                total[ee] = w
    return SparsePolynomial._raw(n, field, {e: c for e, c in total.items() if c})


class _HomogeneousTable:
    """Ranking of the degree-d monomials in n variables (stars and bars)."""

    def __init__(self, n: int, d: int):
        self.n, self.d = n, d
        self.count = math.comb(d + n - 1, n - 1)
        self.binom = np.array([[math.comb(a, b) for b in range(n)] for a in range(d + n)], dtype=np.int64)
        combos = np.array(list(itertools.combinations(range(d + n - 1), n - 1)), dtype=np.int64).reshape(-1, n - 1)
        cuts = np.concatenate(
            [np.full((combos.shape[0], 1), -1), combos, np.full((combos.shape[0], 1), d + n - 1)], axis=1
        )
        exps = np.diff(cuts, axis=1) - 1
        order = np.argsort(self.rank(exps))
        self.exps = exps[order]
        self._moves: dict[tuple[int, int], np.ndarray] = {}
        self._swaps: dict[tuple[int, int], np.ndarray] = {}

    def rank(self, exps: np.ndarray) -> np.ndarray:
        s = np.cumsum(exps[:, :-1], axis=1)
        u = s + np.arange(self.n - 1)
        r = np.zeros(exps.shape[0], dtype=np.int64)
        for k in range(self.n - 1):
            r += self.binom[u[:, k], k + 1]
        return r

    def index(self, exps: Sequence[Monomial]) -> np.ndarray:
        return self.rank(np.array(exps, dtype=np.int64).reshape(-1, self.n))

    def move(self, i: int, j: int) -> np.ndarray:
        key = (i, j)
        if key not in self._moves:
            e = self.exps.copy()
            ok = e[:, i] > 0
            e[ok, i] -= 1
            e[ok, j] += 1
            mv = np.where(ok, self.rank(e), -1)
            self._moves[key] = np.ascontiguousarray(mv, dtype=np.int64)
        return self._moves[key]

    def swap(self, i: int, j: int) -> np.ndarray:
        key = (min(i, j), max(i, j))
        if key not in self._swaps:
            e = self.exps.copy()
            e[:, [i, j]] = e[:, [j, i]]
            self._swaps[key] = self.rank(e)
        return self._swaps[key]


@functools.cache
def homogeneous_table(n: int, d: int) -> _HomogeneousTable:
    return _HomogeneousTable(n, d)


def _substitute_kernel(p: SparsePolynomial, m: SquareMatrix) -> SparsePolynomial | None:
    n, d, field = p.nvars, p.degree, p.field
    table = homogeneous_table(n, d)
    exps, coords, pden = _integer_coords(p)
    dense = np.zeros((table.count, field.degree), dtype=object)
    dense[table.index(exps)] = coords
    mden = math.lcm(1, *(x.den for r in m.rows for x in r))
    mint = [[[v * (mden // x.den) for v in x.num] for x in r] for r in m.rows]
    row_l1 = max(sum(abs(v) for x in r for v in x) for r in mint)
    bound = 2 * int(sum(_multimod.l1_rows(coords))) * row_l1**d
    lm = _multimod.lane_map(field)
    expi_cols = [np.ascontiguousarray(table.exps[:, i]) for i in range(n)]
    res, used = [], []
    idx = 0
    while not _enough(used, bound):
        idx += 1
        q = _multimod.primes(idx)[-1]
        images = _substitute_one_prime(dense, mint, table, expi_cols, lm, q)
        if images is not None:
            res.append(lm.from_lanes(images, q))
            used.append(q)
    lifted = _multimod.crt_signed(res, tuple(used))
    keep = [i for i in range(table.count) if any(lifted[i])]
    out_exps = [tuple(int(x) for x in table.exps[i]) for i in keep]
    return _from_integer_coords(n, field, out_exps, lifted[keep], pden * mden**d)


def _substitute_one_prime(dense, mint, table, expi_cols, lm, q):
    """Images of p o M in every lane modulo q, or None if M is singular mod q."""
    n, d = table.n, table.d
    lanes_img = lm.to_lanes(dense, q)
    ent = np.zeros((n, n, lm.lanes), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            ent[i, j] = lm.to_lanes(np.array([mint[i][j]], dtype=object), q)[:, 0]
    binom = np.array([[math.comb(a, b) % q for b in range(d + 1)] for a in range(d + 1)], dtype=np.int64)
    out = np.empty_like(lanes_img)
    for lane in range(lm.lanes):
        ops = _multimod.gauss_jordan_factors(ent[:, :, lane].tolist(), q)
        if ops is None:
            return None
        vec = np.ascontiguousarray(lanes_img[lane])
        for op in ops:
            if op[0] == "shear":
                _, i, j, c = op
                vec = _kernels.shear_mod(vec, expi_cols[i], table.move(i, j), binom, c, q)
            elif op[0] == "scale":
                _, i, c = op
                pw = np.array([pow(c, k, q) for k in range(d + 1)], dtype=np.int64)
                vec = vec * pw[expi_cols[i]] % q
            else:
                _, i, j = op
                moved = np.zeros_like(vec)
                moved[table.swap(i, j)] = vec
                vec = moved
        out[lane] = vec
    return out


def _enough(ps: list[int], bound: int) -> bool:
    prod = 1
    for q in ps:
        prod *= q
    return prod > 2 * bound + 1


# -- symmetric functions ---------------------------------------------------------------------------


def power_sum_poly(n: int, k: int, field: FieldSpec = QQ) -> SparsePolynomial:
    """p_k = x_1^k + ... + x_n^k."""
    return SparsePolynomial(n, field, {tuple(k if j == i else 0 for j in range(n)): 1 for i in range(n)})


def elementary_symmetric(n: int, k: int, field: FieldSpec = QQ) -> SparsePolynomial:
    terms = {}
    for combo in itertools.combinations(range(n), k):
        e = [0] * n
        for i in combo:
            e[i] = 1
        terms[tuple(e)] = 1
    return SparsePolynomial(n, field, terms)


def newton_convert(power_sums: Sequence) -> list:
    """Elementary symmetric values sigma_1..sigma_k from power sums p_1..p_k.

    Uses k*sigma_k = sum_{i=1..k} (-1)^(i-1) sigma_{k-i} p_i.  Entries may be
    numbers, FieldElements or SparsePolynomials.
    """
    sig = [1]
    for k in range(1, len(power_sums) + 1):
        acc = None
        for i in range(1, k + 1):
            term = sig[k - i] * power_sums[i - 1] if sig[k - i] != 1 else power_sums[i - 1]
            if i % 2 == 0:
                term = -term
            acc = term if acc is None else acc + term
        sig.append(acc * Fraction(1, k))
    return sig[1:]


def power_sums_from_elementary(sigmas: Sequence) -> list:
    """Inverse Newton conversion: p_1..p_k from sigma_1..sigma_k."""
    ps: list = []
    for k in range(1, len(sigmas) + 1):
        acc = sigmas[k - 1] * ((-1) ** (k - 1) * k)
        for i in range(1, k):
            term = sigmas[i - 1] * ps[k - i - 1]
            acc = acc + (term if i % 2 == 1 else -term)
        ps.append(acc)
    return ps
