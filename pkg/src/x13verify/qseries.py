"""Truncated q-series with fractional exponents and exact coefficients.

Exponents are integers in units of 1/N for a per-context denominator N
(312 for level 13, 120 for level 5).  A series stores coefficients on an
arithmetic progression offset + k*step of exponents, because theta constants
only populate a sparse lattice; ``prec`` is the exclusive exponent bound below
which every coefficient is known exactly.
"""

from __future__ import annotations

import cmath
import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import _multimod
from .cycfield import CYC13, QQ, FieldElement, FieldSpec
from .polyring import SparsePolynomial

THETA13_K = (11, 7, 5, 3, 9, 1)
THETA13_SIGN = (1, 1, 1, -1, 1, 1)
THETA5_K = {"a": 3, "b": 1}

_INT64_SAFE = 1 << 62


class SeriesMismatchError(ValueError):
    """Series from different contexts or incompatible coefficient fields."""


class TruncationError(ValueError):
    """A requested coefficient lies at or beyond the known precision."""


@dataclass(frozen=True)
class SeriesContext:
    """Exponent denominator N and default truncation (in powers of q)."""

    den: int
    truncation: Fraction = Fraction(30)

    def __post_init__(self):
        if self.den <= 0:
            raise ValueError("series denominator must be positive")
        object.__setattr__(self, "truncation", Fraction(self.truncation))
        if (self.truncation * self.den).denominator != 1:
            raise ValueError("truncation must be a multiple of 1/N")

    @property
    def prec(self) -> int:
        return int(self.truncation * self.den)

    @classmethod
    def level13(cls, truncation=30) -> "SeriesContext":
        return cls(312, Fraction(truncation))

    @classmethod
    def level5(cls, truncation=30) -> "SeriesContext":
        return cls(120, Fraction(truncation))


def _as_object(a) -> np.ndarray:
    return np.asarray(a, dtype=object)


def _max_abs(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    return int(max(abs(int(x)) for x in a.ravel()))


class PuiseuxSeries:
    """sum_k (num[k] / den) q^{(offset + k*step)/N}, exact below q^{prec/N}.

    ``num`` is an object array of shape (length, D) holding power-basis
    coordinates (D = field degree); ``den`` is a common positive denominator.
    """

    __slots__ = ("ctx", "field", "offset", "step", "num", "den", "prec")

    def __init__(self, ctx: SeriesContext, field: FieldSpec, offset: int, step: int, num, den: int, prec: int):
        num = _as_object(num).reshape(-1, field.degree) if np.size(num) else np.zeros((0, field.degree), dtype=object)
        self.ctx, self.field, self.prec = ctx, field, int(prec)
        self._normalize(int(offset), max(1, int(step)), num, int(den))

    def _normalize(self, offset, step, num, den):
        if den < 0:
            num, den = -num, -den
        # clip to precision
        keep = max(0, -(-(self.prec - offset) // step))
        num = num[:keep]
        nz = np.nonzero(np.any(num != 0, axis=1))[0] if num.size else np.zeros(0, dtype=int)
        if nz.size == 0:
            self.offset, self.step, self.num, self.den = self.prec, 1, np.zeros((0, self.field.degree), dtype=object), 1
            return
        num = num[nz[0] : nz[-1] + 1]
        offset += int(nz[0]) * step
        # coarsen the grid to the gcd of the occupied positions
        pos = np.nonzero(np.any(num != 0, axis=1))[0]
        g = 0
        for p in pos:
            g = math.gcd(g, int(p))
        if g > 1:
            num = num[::g]
            step *= g
        cont = 0
        for x in num.ravel():
            cont = math.gcd(cont, int(x))
            if cont == 1:
                break
        cont = math.gcd(cont, den)
        if cont > 1:
            num = num // cont
            den //= cont
        self.offset, self.step, self.num, self.den = offset, step, num, den

    # -- constructors ----------------------------------------------------------------------------

    @classmethod
    def zero(cls, ctx: SeriesContext, field: FieldSpec = QQ, prec: int | None = None) -> "PuiseuxSeries":
        return cls(ctx, field, 0, 1, [], 1, ctx.prec if prec is None else prec)

    @classmethod
    def from_terms(cls, ctx: SeriesContext, terms, field: FieldSpec = QQ, prec: int | None = None) -> "PuiseuxSeries":
        """Build from {exponent in 1/N units: coefficient}."""
        prec = ctx.prec if prec is None else prec
        items = {}
        for e, c in dict(terms).items():
            if e < prec:
                c = c if isinstance(c, FieldElement) else field(c)
                items[int(e)] = items.get(int(e), field.zero) + c
        items = {e: c for e, c in items.items() if not c.is_zero()}
        if not items:
            return cls.zero(ctx, field, prec)
        lo = min(items)
        den = 1
        for c in items.values():
            den = den * c.den // math.gcd(den, c.den)
        num = np.zeros((max(items) - lo + 1, field.degree), dtype=object)
        for e, c in items.items():
            num[e - lo] = [x * (den // c.den) for x in c.num]
        return cls(ctx, field, lo, 1, num, den, prec)

    @classmethod
    def monomial(cls, ctx: SeriesContext, exponent: int, coeff=1, field: FieldSpec = QQ, prec=None) -> "PuiseuxSeries":
        return cls.from_terms(ctx, {exponent: coeff}, field, prec)

    # -- views ---------------------------------------------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.shape[0] == 0

    def __bool__(self) -> bool:
        return not self.is_zero()

    @property
    def valuation(self) -> int | None:
        """Lowest exponent with nonzero coefficient (1/N units), None if zero."""
        return None if self.is_zero() else self.offset

    @property
    def valuation_q(self) -> Fraction | None:
        v = self.valuation
        return None if v is None else Fraction(v, self.ctx.den)

    @property
    def prec_q(self) -> Fraction:
        return Fraction(self.prec, self.ctx.den)

    def _element(self, row) -> FieldElement:
        return FieldElement._make(self.field, [int(x) for x in row], self.den)

    def coefficient(self, e: int) -> FieldElement:
        if e >= self.prec:
            raise TruncationError(f"exponent {e}/{self.ctx.den} is beyond the known precision {self.prec}/{self.ctx.den}")
        k, r = divmod(e - self.offset, self.step)
        if self.is_zero() or r or k < 0 or k >= self.num.shape[0]:
            return self.field.zero
        return self._element(self.num[k])

    def leading_coefficient(self) -> FieldElement:
        return self.field.zero if self.is_zero() else self._element(self.num[0])

    def terms(self) -> list[tuple[int, FieldElement]]:
        out = []
        for k, row in enumerate(self.num):
            if any(row):
                out.append((self.offset + k * self.step, self._element(row)))
        return out

    def is_rational(self) -> bool:
        return self.field.degree == 1 or not np.any(self.num[:, 1:] != 0)

    def to_rational(self) -> "PuiseuxSeries":
        if self.field == QQ:
            return self
        if not self.is_rational():
            raise SeriesMismatchError("series has irrational coefficients")
        return PuiseuxSeries(self.ctx, QQ, self.offset, self.step, self.num[:, :1], self.den, self.prec)

    def change_field(self, field: FieldSpec) -> "PuiseuxSeries":
        if field == self.field:
            return self
        if self.field != QQ:
            raise SeriesMismatchError(f"cannot move a {self.field.name} series into {field.name}")
        num = np.zeros((self.num.shape[0], field.degree), dtype=object)
        num[:, 0] = self.num[:, 0]
        return PuiseuxSeries(self.ctx, field, self.offset, self.step, num, self.den, self.prec)

    def truncate(self, prec: int) -> "PuiseuxSeries":
        return PuiseuxSeries(self.ctx, self.field, self.offset, self.step, self.num, self.den, min(prec, self.prec))

    def __repr__(self) -> str:
        return f"PuiseuxSeries({format_leading(self)}, prec={self.prec_q})"

    # -- arithmetic --------------------------------------------------------------------------------------

    def _check(self, other: "PuiseuxSeries") -> None:
        if self.ctx.den != other.ctx.den:
            raise SeriesMismatchError(f"series contexts differ: 1/{self.ctx.den} vs 1/{other.ctx.den}")

    def _unify(self, other: "PuiseuxSeries"):
        self._check(other)
        if self.field == other.field:
            return self, other
        if self.field == QQ:
            return self.change_field(other.field), other
        if other.field == QQ:
            return self, other.change_field(self.field)
        raise SeriesMismatchError(f"coefficient fields differ: {self.field.name} vs {other.field.name}")

    def _coerce(self, other) -> "PuiseuxSeries":
        if isinstance(other, PuiseuxSeries):
            return other
        c = other if isinstance(other, FieldElement) else self.field(other)
        return PuiseuxSeries.from_terms(self.ctx, {0: c}, c.spec, self.prec)

    def _grid(self, offset: int, step: int, length: int, den: int) -> np.ndarray:
        out = np.zeros((length, self.field.degree), dtype=object)
        if self.is_zero():
            return out
        scale = den // self.den
        start = self.offset - offset
        ratio = self.step // step
        idx = start // step + np.arange(self.num.shape[0]) * ratio
        ok = idx < length
        out[idx[ok]] = self.num[ok] * scale
        return out

    def __add__(self, other) -> "PuiseuxSeries":
        a, b = self._unify(self._coerce(other))
        prec = min(a.prec, b.prec)
        if a.is_zero() or b.is_zero():
            keep = b if a.is_zero() else a
            return keep.truncate(prec) if keep.field == a.field else keep.change_field(a.field).truncate(prec)
        off = min(a.offset, b.offset)
        step = math.gcd(a.step, b.step, abs(a.offset - b.offset))
        length = max(0, -(-(prec - off) // step))
        den = a.den * b.den // math.gcd(a.den, b.den)
        num = a._grid(off, step, length, den) + b._grid(off, step, length, den)
        return PuiseuxSeries(a.ctx, a.field, off, step, num, den, prec)

    __radd__ = __add__

    def __neg__(self) -> "PuiseuxSeries":
        return PuiseuxSeries(self.ctx, self.field, self.offset, self.step, -self.num, self.den, self.prec)

    def __sub__(self, other) -> "PuiseuxSeries":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "PuiseuxSeries":
        return self._coerce(other) - self

    def scale(self, c) -> "PuiseuxSeries":
        if isinstance(c, FieldElement) and not c.is_rational():
            return self * c
        c = Fraction(c.to_fraction() if isinstance(c, FieldElement) else c)
        return PuiseuxSeries(self.ctx, self.field, self.offset, self.step, self.num * c.numerator, self.den * c.denominator, self.prec)

    def __mul__(self, other) -> "PuiseuxSeries":
        if not isinstance(other, PuiseuxSeries):
            if isinstance(other, (int, Fraction)) or (isinstance(other, FieldElement) and other.is_rational()):
                return self.scale(other)
            other = self._coerce(other)
        a, b = self._unify(other)
        if a.is_zero() or b.is_zero():
            va = a.offset if not a.is_zero() else a.prec
            vb = b.offset if not b.is_zero() else b.prec
            return PuiseuxSeries.zero(a.ctx, a.field, min(a.prec + vb, b.prec + va))
        prec = min(a.prec + b.offset, b.prec + a.offset)
        step = math.gcd(a.step, b.step)
        off = a.offset + b.offset
        length = max(0, -(-(prec - off) // step))
        la = min(length, -(-(a.prec - a.offset) // step))
        lb = min(length, -(-(b.prec - b.offset) // step))
        ga = a._grid(a.offset, step, la, a.den)
        gb = b._grid(b.offset, step, lb, b.den)
        num = convolve_exact(ga, gb, length, a.field)
        return PuiseuxSeries(a.ctx, a.field, off, step, num, a.den * b.den, prec)

    def __rmul__(self, other) -> "PuiseuxSeries":
        return self * other

    def __pow__(self, k: int) -> "PuiseuxSeries":
        if k < 0:
            raise ValueError("series division is not supported")
        result = None
        base = self
        while k:
            if k & 1:
                result = base if result is None else result * base
            k >>= 1
            if k:
                base = base * base
        if result is None:
            return PuiseuxSeries.from_terms(self.ctx, {0: 1}, self.field, self.ctx.prec)
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        return self.ctx.den == other.ctx.den and self.prec == other.prec and (self - other).is_zero()

    __hash__ = None

    def agrees_with(self, other: "PuiseuxSeries") -> tuple[bool, int | None]:
        """Compare below the common precision; returns (equal, first differing exponent)."""
        diff = self - other
        return (diff.is_zero(), diff.valuation)

    # -- numeric / export -------------------------------------------------------------------------------

    def evaluate_numeric(self, z: complex) -> complex:
        """Sum of the stored terms at q = exp(2 pi i z), q^{e/N} = exp(2 pi i z e / N)."""
        total = 0j
        for e, c in self.terms():
            total += c.embed() * cmath.exp(2j * math.pi * z * e / self.ctx.den)
        return total

    def to_lines(self) -> list[str]:
        from .cycfield import format_element

        return [f"{e}/{self.ctx.den} : {format_element(c)}" for e, c in self.terms()]

    def to_json(self) -> dict:
        return {
            "denominator": self.ctx.den,
            "precision": self.prec,
            "field": self.field.name,
            "entries": [[e, c.to_json()] for e, c in self.terms()],
        }


def convolve_exact(a: np.ndarray, b: np.ndarray, out_len: int, field: FieldSpec) -> np.ndarray:
    """Truncated product of coordinate arrays (L, D) of exact integers."""
    if out_len <= 0 or a.shape[0] == 0 or b.shape[0] == 0:
        return np.zeros((max(out_len, 0), field.degree), dtype=object)
    if field.degree == 1:
        ma, mb = _max_abs(a), _max_abs(b)
        if min(a.shape[0], b.shape[0]) * ma * mb < _INT64_SAFE:
            prod = np.convolve(a[:, 0].astype(np.int64), b[:, 0].astype(np.int64))[:out_len]
            out = np.zeros((out_len, 1), dtype=object)
            out[: prod.size, 0] = prod.astype(object)
            return out
        if a.shape[0] * b.shape[0] <= 4096:
            prod = np.convolve(a[:, 0], b[:, 0])[:out_len]
            out = np.zeros((out_len, 1), dtype=object)
            out[: prod.size, 0] = prod
            return out
    if not _multimod.supports(field):
        raise SeriesMismatchError(f"series products over {field.name} are not supported")
    return _multimod.exact_convolution(a, b, out_len, field)


def format_leading(s: PuiseuxSeries) -> str:
    """Leading term in the style q^{51/104}(3 + O(q))."""
    from .cycfield import format_element

    if s.is_zero():
        return f"O(q^{{{s.prec_q}}})"
    v = s.valuation_q
    c = format_element(s.leading_coefficient())
    head = "" if v == 0 else ("q" if v == 1 else f"q^{{{v}}}")
    return f"{head}({c} + O(q))" if head else f"{c} + O(q)"


# -- generators -----------------------------------------------------------------------------------------


def _theta_terms(level: int, k: int, den: int, prec: int) -> dict[int, int]:
    """q^{k^2/(8 level)} sum (-1)^n q^{(level n^2 + k n)/2} in 1/den units."""
    base = Fraction(k * k, 8 * level) * den
    unit = Fraction(den, 2)
    if base.denominator != 1 or unit.denominator != 1:
        raise SeriesMismatchError(f"denominator {den} cannot hold level-{level} theta exponents")
    out = {}
    n = 0
    while True:
        added = False
        for m in {n, -n}:
            e = int(base + unit * (level * m * m + k * m))
            if e < prec:
                out[e] = out.get(e, 0) + (-1 if m % 2 else 1)
                added = True
        if not added and n > 0:
            return out
        n += 1


def theta13(i: int, ctx: SeriesContext, prec: int | None = None) -> PuiseuxSeries:
    """a_i for i = 1..6 (characteristic k/13, k = 11, 7, 5, 3, 9, 1; a_4 negated)."""
    if not 1 <= i <= 6:
        raise ValueError("theta13 index must be in 1..6")
    if ctx.den % 104:
        raise SeriesMismatchError("level-13 theta constants need N divisible by 104")
    prec = ctx.prec if prec is None else prec
    terms = _theta_terms(13, THETA13_K[i - 1], ctx.den, prec)
    sign = THETA13_SIGN[i - 1]
    return PuiseuxSeries.from_terms(ctx, {e: sign * c for e, c in terms.items()}, QQ, prec)


def theta5(which: str, ctx: SeriesContext, prec: int | None = None) -> PuiseuxSeries:
    """The order-five constants a (k = 3) and b (k = 1)."""
    if which not in THETA5_K:
        raise ValueError("theta5 takes 'a' or 'b'")
    if ctx.den % 40:
        raise SeriesMismatchError("level-5 theta constants need N divisible by 40")
    prec = ctx.prec if prec is None else prec
    return PuiseuxSeries.from_terms(ctx, _theta_terms(5, THETA5_K[which], ctx.den, prec), QQ, prec)


@functools.cache
def _euler_product_power(k: int, length: int) -> tuple[int, ...]:
    """Coefficients of prod_{n>=1} (1 - q^n)^k up to q^{length-1}."""
    base = [0] * length
    # pentagonal number theorem
    m = 0
    while True:
        hit = False
        for j in ((m, -m) if m else (0,)):
            e = j * (3 * j - 1) // 2
            if e < length:
                base[e] += -1 if j % 2 else 1
                hit = True
        if not hit:
            break
        m += 1
    out = [1] + [0] * (length - 1)
    b = np.array(base, dtype=object)
    acc = np.array(out, dtype=object)
    e = k
    while e:
        if e & 1:
            acc = np.convolve(acc, b)[:length]
        e >>= 1
        if e:
            b = np.convolve(b, b)[:length]
    return tuple(int(x) for x in acc)


def eta_power(k: int, ctx: SeriesContext, prec: int | None = None) -> PuiseuxSeries:
    """eta^k = q^{k/24} prod (1 - q^n)^k."""
    if k < 0:
        raise ValueError("eta_power needs k >= 0")
    if ctx.den % 24:
        raise SeriesMismatchError("eta needs N divisible by 24")
    prec = ctx.prec if prec is None else prec
    off = k * ctx.den // 24
    length = max(0, -(-(prec - off) // ctx.den))
    coeffs = _euler_product_power(k, max(length, 1))
    return PuiseuxSeries(ctx, QQ, off, ctx.den, np.array(coeffs[:length], dtype=object).reshape(-1, 1), 1, prec)


def eta(ctx: SeriesContext, prec: int | None = None) -> PuiseuxSeries:
    return eta_power(1, ctx, prec)


def delta(ctx: SeriesContext, prec: int | None = None) -> PuiseuxSeries:
    """The discriminant eta^24."""
    return eta_power(24, ctx, prec)


def _divisor_power_sum(n: int, r: int) -> int:
    total = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            total += d**r
            if d * d != n:
                total += (n // d) ** r
        d += 1
    return total


def eisenstein(weight: int, ctx: SeriesContext, prec: int | None = None) -> PuiseuxSeries:
    """E_4 = 1 + 240 sum sigma_3(n) q^n and E_6 = 1 - 504 sum sigma_5(n) q^n."""
    if weight not in (4, 6):
        raise ValueError("only weights 4 and 6 are provided")
    prec = ctx.prec if prec is None else prec
    length = max(0, -(-prec // ctx.den))
    c, r = (240, 3) if weight == 4 else (-504, 5)
    coeffs = [1] + [c * _divisor_power_sum(n, r) for n in range(1, length)]
    return PuiseuxSeries(ctx, QQ, 0, ctx.den, np.array(coeffs[:length], dtype=object).reshape(-1, 1), 1, prec)


def theta_point13(ctx: SeriesContext, prec: int | None = None) -> list[PuiseuxSeries]:
    """x_i = eta * a_i, i = 1..6."""
    e = eta(ctx, prec)
    return [e * theta13(i, ctx, prec) for i in range(1, 7)]


def theta_point5(ctx: SeriesContext, prec: int | None = None) -> list[PuiseuxSeries]:
    """(eta * a, eta * b) for the icosahedral forms."""
    e = eta(ctx, prec)
    return [e * theta5("a", ctx, prec), e * theta5("b", ctx, prec)]


# -- substitution ---------------------------------------------------------------------------------------------


class SeriesEvaluator:
    """Substitutes polynomials into a fixed tuple of series, sharing monomials."""

    def __init__(self, xs: Sequence[PuiseuxSeries]):
        xs = list(xs)
        if not xs:
            raise ValueError("need at least one series")
        for x in xs[1:]:
            xs[0]._check(x)
        self.xs = xs
        self.ctx = xs[0].ctx
        self._powers: dict[tuple[int, int], PuiseuxSeries] = {}
        self._monos: dict[tuple, PuiseuxSeries] = {}

    def power(self, i: int, k: int) -> PuiseuxSeries:
        key = (i, k)
        if key not in self._powers:
            if k == 1:
                self._powers[key] = self.xs[i]
            else:
                h = k // 2
                p = self.power(i, h) * self.power(i, h)
                self._powers[key] = p if k % 2 == 0 else p * self.xs[i]
        return self._powers[key]

    def monomial(self, exps: tuple) -> PuiseuxSeries:
        if exps in self._monos:
            return self._monos[exps]
        last = max((i for i, e in enumerate(exps) if e), default=None)
        if last is None:
            out = PuiseuxSeries.from_terms(self.ctx, {0: 1}, QQ, self.ctx.prec)
        else:
            head = tuple(e if i < last else 0 for i, e in enumerate(exps))
            pw = self.power(last, exps[last])
            out = pw if not any(head) else self.monomial(head) * pw
        self._monos[exps] = out
        return out

    def substitute(self, p: SparsePolynomial) -> PuiseuxSeries:
        if p.nvars != len(self.xs):
            raise ValueError(f"polynomial has {p.nvars} variables, got {len(self.xs)} series")
        xfield = QQ
        for x in self.xs:
            if x.field != QQ:
                xfield = x.field
        if p.is_zero():
            prec = min(x.prec for x in self.xs)
            return PuiseuxSeries.zero(self.ctx, p.field if xfield == QQ else xfield, prec)
        if xfield != QQ:
            total = None
            for e, c in p.sorted_terms():
                t = self.monomial(e) * c
                total = t if total is None else total + t
            return total
        return self._combine(p)

    def _combine(self, p: SparsePolynomial) -> PuiseuxSeries:
        """sum coeff * monomial as one matrix product on a common grid."""
        items = p.sorted_terms()
        monos = [self.monomial(e) for e, _ in items]
        prec = min(m.prec for m in monos)
        nonzero = [m for m in monos if not m.is_zero()]
        field = p.field
        if not nonzero:
            return PuiseuxSeries.zero(self.ctx, field, prec)
        off = min(m.offset for m in nonzero)
        step = 0
        for m in nonzero:
            step = math.gcd(step, m.step, m.offset - off)
        length = max(0, -(-(prec - off) // step))
        mden = 1
        for m in nonzero:
            mden = mden * m.den // math.gcd(mden, m.den)
        grid = np.zeros((len(items), length), dtype=object)
        for r, m in enumerate(monos):
            if not m.is_zero():
                grid[r] = m._grid(off, step, length, mden)[:, 0]
        cden = 1
        for _, c in items:
            cden = cden * c.den // math.gcd(cden, c.den)
        coef = np.array([[x * (cden // c.den) for x in c.num] for _, c in items], dtype=object)
        num = grid.T.dot(coef) if length else np.zeros((0, field.degree), dtype=object)
        return PuiseuxSeries(self.ctx, field, off, step, num, mden * cden, prec)


def substitute_series(p: SparsePolynomial, xs: Sequence[PuiseuxSeries] | SeriesEvaluator) -> PuiseuxSeries:
    """p(x_1, ..., x_n) as a truncated series."""
    ev = xs if isinstance(xs, SeriesEvaluator) else SeriesEvaluator(xs)
    return ev.substitute(p)


def power_sum_series(family: Iterable[PuiseuxSeries], k: int) -> PuiseuxSeries:
    total = None
    for s in family:
        t = s**k
        total = t if total is None else total + t
    if total is None:
        raise ValueError("empty family")
    return total


# -- numeric evaluation -------------------------------------------------------------------------------------------

_NUMERIC_NMAX = 10_000


def _numeric_theta(level: int, k: int, z: complex) -> complex:
    if z.imag <= 0:
        raise ValueError("z must lie in the upper half-plane")
    w = 2j * math.pi * z
    total = 0j
    n = 0
    while True:
        added = 0.0
        for m in ({n, -n} if n else {0}):
            t = cmath.exp(w * (Fraction(k * k, 8 * level) + Fraction(level * m * m + k * m, 2)))
            t *= -1 if m % 2 else 1
            total += t
            added = max(added, abs(t))
        if n > 2 and added < 1e-17 * max(1.0, abs(total)):
            return total
        n += 1
        if n > _NUMERIC_NMAX:
            raise ArithmeticError(f"theta series did not converge at z={z}")


def numeric_theta(i: int, z: complex) -> complex:
    """Double-precision a_i(z) by direct summation."""
    if not 1 <= i <= 6:
        raise ValueError("theta index must be in 1..6")
    return THETA13_SIGN[i - 1] * _numeric_theta(13, THETA13_K[i - 1], complex(z))


def numeric_theta_vector(z: complex) -> list[complex]:
    return [numeric_theta(i, z) for i in range(1, 7)]


def numeric_theta5(which: str, z: complex) -> complex:
    return _numeric_theta(5, THETA5_K[which], complex(z))


def numeric_eta(z: complex) -> complex:
    z = complex(z)
    if z.imag <= 0:
        raise ValueError("z must lie in the upper half-plane")
    q = cmath.exp(2j * math.pi * z)
    prod = cmath.exp(2j * math.pi * z / 24)
    n = 1
    while True:
        qn = q**n
        prod *= 1 - qn
        if abs(qn) < 1e-17:
            return prod
        n += 1
        if n > _NUMERIC_NMAX:
            raise ArithmeticError(f"eta product did not converge at z={z}")
