"""Exact arithmetic in number fields Q[x]/(m(x)).

Elements are stored as an integer numerator vector in the power basis
1, x, ..., x^(d-1) together with one positive common denominator, kept in
lowest terms.  Everything is immutable.

The module also builds the constants of Q(zeta_13) used throughout the
package: the quadratic Gauss sum, the quartic periods and the r-constants
appearing in the cubic transformation law.
"""

from __future__ import annotations

import cmath
import functools
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, NamedTuple, Sequence

import numpy as np


class FieldMismatchError(ValueError):
    """Operands live in different number fields."""


class SignResolutionError(RuntimeError):
    """No (or more than one) sign choice makes the cubic transformation law hold."""


@dataclass(frozen=True)
class FieldSpec:
    """A number field presented as Q[x]/(m(x)) with a chosen complex embedding.

    ``modulus`` lists the integer coefficients of m from the constant term up;
    m must be monic.  ``cyclic_order`` is set when m divides x^n - 1, which lets
    the fast kernels work in Z[t]/(t^n - 1) and reduce afterwards.
    """

    name: str
    modulus: tuple[int, ...]
    embedding_root: complex
    cyclic_order: int | None = None
    _tail: tuple[tuple[int, int], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        mod = tuple(int(c) for c in self.modulus)
        object.__setattr__(self, "modulus", mod)
        if len(mod) < 2 or mod[-1] != 1:
            raise ValueError(f"modulus of {self.name} must be monic of degree >= 1")
        val = sum(c * self.embedding_root**i for i, c in enumerate(mod))
        if abs(val) >= 1e-9:
            raise ValueError(f"embedding root is not a root of the modulus of {self.name}")
        if self.cyclic_order is not None:
            # m | x^n - 1  <=>  x^n reduces to 1
            n = self.cyclic_order
            xn = _reduce_list([0] * n + [1], self._nz_tail(mod), len(mod) - 1)
            if xn != [1] + [0] * (len(mod) - 2):
                raise ValueError(f"modulus of {self.name} does not divide x^{n} - 1")
        object.__setattr__(self, "_tail", self._nz_tail(mod))

    @staticmethod
    def _nz_tail(mod: tuple[int, ...]) -> tuple[tuple[int, int], ...]:
        return tuple((i, c) for i, c in enumerate(mod[:-1]) if c)

    @property
    def degree(self) -> int:
        return len(self.modulus) - 1

    # -- element constructors -------------------------------------------------

    def element(self, coords: Iterable) -> "FieldElement":
        coords = [Fraction(c) for c in coords]
        if len(coords) > self.degree:
            return self.from_polynomial(coords)
        coords += [Fraction(0)] * (self.degree - len(coords))
        den = math.lcm(*(c.denominator for c in coords))
        return FieldElement._make(self, [int(c * den) for c in coords], den)

    def from_polynomial(self, coeffs: Sequence) -> "FieldElement":
        """Reduce an arbitrary-length coefficient list modulo m."""
        coeffs = [Fraction(c) for c in coeffs]
        den = math.lcm(1, *(c.denominator for c in coeffs))
        nums = [int(c * den) for c in coeffs]
        if len(nums) > self.degree:
            nums = _reduce_list(nums, self._tail, self.degree)
        nums += [0] * (self.degree - len(nums))
        return FieldElement._make(self, nums, den)

    def __call__(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.spec != self:
                raise FieldMismatchError(f"{value.spec.name} element used in {self.name}")
            return value
        value = Fraction(value)
        return FieldElement._make(
            self, [value.numerator] + [0] * (self.degree - 1), value.denominator
        )

    @functools.cached_property
    def zero(self) -> "FieldElement":
        return self(0)

    @functools.cached_property
    def one(self) -> "FieldElement":
        return self(1)

    @functools.cached_property
    def gen(self) -> "FieldElement":
        """The class of x."""
        return self.from_polynomial([0, 1])

    def gen_power(self, k: int) -> "FieldElement":
        if self.cyclic_order is not None:
            k %= self.cyclic_order
        elif k < 0:
            return self.gen ** k
        return self.from_polynomial([0] * k + [1])

    def to_json(self) -> list[int]:
        return list(self.modulus)


def _reduce_list(nums: list[int], tail, d: int) -> list[int]:
    for k in range(len(nums) - 1, d - 1, -1):
        c = nums[k]
        if c:
            base = k - d
            for i, mi in tail:
                nums[base + i] -= c * mi
    return nums[:d]


class FieldElement:
    """Exact element of a number field; see :class:`FieldSpec`."""

    __slots__ = ("spec", "num", "den")

    def __init__(self, spec: FieldSpec, coords: Iterable):
        other = spec.element(coords)
        self.spec, self.num, self.den = other.spec, other.num, other.den

    @classmethod
    def _make(cls, spec: FieldSpec, nums: list[int], den: int) -> "FieldElement":
        if den < 0:
            nums = [-n for n in nums]
            den = -den
        g = math.gcd(den, *nums)
        if g != 1:
            nums = [n // g for n in nums]
            den //= g
        obj = object.__new__(cls)
        obj.spec = spec
        obj.num = tuple(nums)
        obj.den = den
        return obj

    # -- views ------------------------------------------------------------------

    @property
    def coords(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(n, self.den) for n in self.num)

    def is_zero(self) -> bool:
        return not any(self.num)

    def __bool__(self) -> bool:
        return any(self.num)

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is not rational")
        return Fraction(self.num[0], self.den)

    def embed(self, root: complex | None = None) -> complex:
        """Evaluate the coordinates at the embedding root in double precision."""
        r = self.spec.embedding_root if root is None else root
        acc = 0j
        for n in reversed(self.num):
            acc = acc * r + n / self.den
        return complex(acc)

    def conjugate_embedding(self, a: int) -> complex:
        """Embedding x -> root**a (a Galois conjugate for cyclotomic fields)."""
        return self.embed(self.spec.embedding_root**a)

    # -- arithmetic -------------------------------------------------------------

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.spec is not self.spec and other.spec != self.spec:
                raise FieldMismatchError(
                    f"cannot combine {self.spec.name} with {other.spec.name}"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return self.spec(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return FieldElement._make(
                self.spec, [a + b for a, b in zip(self.num, other.num)], self.den
            )
        da, db = self.den, other.den
        return FieldElement._make(
            self.spec, [a * db + b * da for a, b in zip(self.num, other.num)], da * db
        )

    __radd__ = __add__

    def __neg__(self) -> "FieldElement":
        obj = object.__new__(FieldElement)
        obj.spec, obj.num, obj.den = self.spec, tuple(-n for n in self.num), self.den
        return obj

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return FieldElement._make(self.spec, [n * other for n in self.num], self.den)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        d = self.spec.degree
        if d == 1:
            return FieldElement._make(self.spec, [self.num[0] * other.num[0]], self.den * other.den)
        prod = [0] * (2 * d - 1)
        bn = other.num
        for i, a in enumerate(self.num):
            if a:
                for j, b in enumerate(bn):
                    if b:
                        prod[i + j] += a * b
        return FieldElement._make(
            self.spec, _reduce_list(prod, self.spec._tail, d), self.den * other.den
        )

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in " + self.spec.name)
        # extended Euclid in Q[x]: s*a + t*m = 1
        a = [Fraction(n, self.den) for n in self.num]
        m = [Fraction(c) for c in self.spec.modulus]
        s = _poly_xgcd_inverse(_trim(a), m)
        return self.spec.from_polynomial(s)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.spec(other) * self.inverse()

    def __pow__(self, k: int) -> "FieldElement":
        if k < 0:
            return self.inverse() ** (-k)
        result = self.spec.one
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.spec(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.spec == other.spec and self.den == other.den and self.num == other.num

    def __hash__(self) -> int:
        return hash((self.spec.modulus, self.num, self.den))

    def __repr__(self) -> str:
        return f"FieldElement({self.spec.name}, {format_element(self)})"

    # -- serialization ----------------------------------------------------------

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coords]

    @classmethod
    def from_json(cls, spec: FieldSpec, data: Sequence[str]) -> "FieldElement":
        return spec.element(Fraction(s) for s in data)


def format_element(a: FieldElement, symbol: str = "z") -> str:
    parts = []
    for i, c in enumerate(a.coords):
        if not c:
            continue
        mono = "" if i == 0 else (symbol if i == 1 else f"{symbol}^{i}")
        if mono and abs(c) == 1:
            parts.append(("-" if c < 0 else "+") + mono)
        else:
            parts.append(f"{'+' if c > 0 else '-'}{abs(c)}{'*' + mono if mono else ''}")
    if not parts:
        return "0"
    s = "".join(parts)
    return s[1:] if s.startswith("+") else s


def _trim(p: list[Fraction]) -> list[Fraction]:
    while p and p[-1] == 0:
        p = p[:-1]
    return p


def _poly_divmod(a: list[Fraction], b: list[Fraction]):
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    lead = b[-1]
    while len(a) >= len(b) and a:
        c = a[-1] / lead
        shift = len(a) - len(b)
        q[shift] = c
        for i, bi in enumerate(b):
            a[shift + i] -= c * bi
        a = _trim(a)
    return q, a


def _poly_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _poly_sub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    b = list(b) + [Fraction(0)] * (n - len(b))
    return _trim([x - y for x, y in zip(a, b)])


def _poly_xgcd_inverse(a: list[Fraction], m: list[Fraction]) -> list[Fraction]:
    r0, r1 = m, a
    s0, s1 = [], [Fraction(1)]
    while r1 and len(r1) > 1:
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
    if not r1:
        raise ZeroDivisionError("element is not invertible (modulus not irreducible?)")
    return [c / r1[0] for c in s1]


def field_arith(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    """Apply ``op`` in {'add', 'sub', 'mul', 'div'} to two elements of one field."""
    if not isinstance(a, FieldElement) or not isinstance(b, FieldElement):
        raise TypeError("field_arith expects FieldElement operands")
    if a.spec != b.spec:
        raise FieldMismatchError(f"cannot combine {a.spec.name} with {b.spec.name}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if b.is_zero():
            raise ZeroDivisionError("division by zero field element")
        return a / b
    raise ValueError(f"unknown field operation {op!r}")


def embed_complex(a: FieldElement) -> complex:
    return a.embed()


# -- concrete fields ------------------------------------------------------------

QQ = FieldSpec("Q", (0, 1), 0j)


def cyclotomic_spec(p: int) -> FieldSpec:
    """Q(zeta_p) for an odd prime p, modulus 1 + x + ... + x^(p-1)."""
    return FieldSpec(f"Q(zeta_{p})", (1,) * p, cmath.exp(2j * cmath.pi / p), cyclic_order=p)


CYC13 = cyclotomic_spec(13)
QSQRT_M7 = FieldSpec("Q(sqrt(-7))", (7, 0, 1), 1j * math.sqrt(7))


def zeta(k: int = 1) -> FieldElement:
    return CYC13.gen_power(k)


def legendre13(a: int) -> int:
    a %= 13
    if a == 0:
        return 0
    return 1 if pow(a, 6, 13) == 1 else -1


@functools.cache
def sqrt13_constant() -> FieldElement:
    """The quadratic Gauss sum sum_a (a|13) zeta^a, a square root of 13."""
    return CYC13.from_polynomial([legendre13(a) for a in range(13)])


@functools.cache
def theta_periods() -> tuple[FieldElement, FieldElement, FieldElement, FieldElement]:
    """The four cubic periods, sums over the cosets of {1, 3, 9} in (Z/13)^*."""
    cosets = ((1, 3, 9), (2, 6, 5), (4, 12, 10), (8, 11, 7))
    return tuple(sum((zeta(k) for k in c), CYC13.zero) for c in cosets)


@functools.cache
def alpha_beta_gamma() -> tuple[FieldElement, FieldElement, FieldElement]:
    z = zeta
    alpha = z(1) + z(12) - z(5) - z(8)
    beta = z(3) + z(10) - z(2) - z(11)
    gamma = z(9) + z(4) - z(6) - z(7)
    return alpha, beta, gamma


def period_square_roots(target: FieldElement) -> list[FieldElement]:
    """Both square roots of ``target`` inside the quartic subfield of Q(zeta_13).

    The quartic subfield is spanned by the periods.  Each sign pattern of the
    four conjugate square roots gives a linear system for the period
    coordinates; candidates are rationalised and checked exactly.
    """
    periods = theta_periods()
    reps = (1, 2, 4, 8)
    basis = np.array([[p.conjugate_embedding(g) for p in periods] for g in reps])
    conj_roots = [cmath.sqrt(target.conjugate_embedding(g)) for g in reps]
    found: list[FieldElement] = []
    for signs in itertools.product((1, -1), repeat=4):
        rhs = np.array([s * r for s, r in zip(signs, conj_roots)])
        c = np.linalg.solve(basis, rhs)
        if np.max(np.abs(c.imag)) > 1e-6:
            continue
        coeffs = [Fraction(float(v)).limit_denominator(1000) for v in c.real]
        cand = sum((k * p for k, p in zip(coeffs, periods)), CYC13.zero)
        if cand * cand == target and cand not in found:
            found.append(cand)
    return found


class RConstants(NamedTuple):
    r0: FieldElement
    rinf: FieldElement
    r1: FieldElement
    r2: FieldElement
    r3: FieldElement
    r4: FieldElement


def r_constant_candidates() -> tuple[dict[str, FieldElement], list[FieldElement], list[FieldElement]]:
    """Fixed constants plus the two square-root pairs for r2 and r4.

    Each pair is ordered principal value first (positive imaginary part).
    """
    t1, t2, t3, t4 = theta_periods()
    s13 = sqrt13_constant()
    fixed = {
        "r0": 2 * (t1 - t3) - 3 * (t2 - t4),
        "rinf": 2 * (t4 - t2) - 3 * (t1 - t3),
        "r1": t1 - t3 + t2 - t4,
        "r3": -(t1 - t3 - t2 + t4),
    }
    half = Fraction(1, 2)
    r2s = period_square_roots((3 * s13 - 13) * half)
    r4s = period_square_roots((-3 * s13 - 13) * half)
    if len(r2s) != 2 or len(r4s) != 2:
        raise SignResolutionError("could not locate square roots in the quartic subfield")
    r2s.sort(key=lambda a: -a.embed().imag)
    r4s.sort(key=lambda a: -a.embed().imag)
    return fixed, r2s, r4s


def resolve_r_constants(holds: Callable[[RConstants], bool]) -> tuple[RConstants, dict]:
    """Try every sign pair for (r2, r4); exactly one must satisfy ``holds``."""
    fixed, r2s, r4s = r_constant_candidates()
    good = []
    tried = {}
    for (i, r2), (j, r4) in itertools.product(enumerate(r2s), enumerate(r4s)):
        cand = RConstants(fixed["r0"], fixed["rinf"], fixed["r1"], r2, fixed["r3"], r4)
        ok = holds(cand)
        tried[f"r2={'+-'[i]},r4={'+-'[j]}"] = ok
        if ok:
            good.append(cand)
    if len(good) != 1:
        raise SignResolutionError(f"expected one consistent sign pair, found {len(good)}: {tried}")
    return good[0], tried


@functools.cache
def r_constants() -> RConstants:
    """r0, r_inf, r1..r4 with the square-root signs pinned by the cubic law."""
    from .forms import d_transform_holds

    resolved, _ = resolve_r_constants(d_transform_holds)
    return resolved
