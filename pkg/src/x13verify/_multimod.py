"""Multimodular exact arithmetic over Q and Q(zeta_13).

Integer data is reduced modulo several primes p = 1 (mod 13) below 2**31.
For such p the field Q(zeta_13) has twelve embeddings into F_p (zeta -> w^k
for a primitive 13th root of unity w), so a product of cyclotomic integers
becomes twelve independent scalar products, one per "lane".  Results are
mapped back to power-basis coordinates by an inverse Vandermonde matrix and
lifted to Z by Chinese remaindering against an a-priori size bound.
"""

from __future__ import annotations

import functools

import numpy as np

from . import _kernels
from .cycfield import CYC13, QQ, FieldSpec

PRIME_CEILING = 1 << 31


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for sp in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % sp == 0:
            return n == sp
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for base in (2, 3, 5, 7, 11, 13, 17):
        x = pow(base, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@functools.cache
def _prime_list(count: int) -> tuple[int, ...]:
    out = []
    # largest n with n = 1 (mod 26) below the ceiling
    n = PRIME_CEILING - 1 - ((PRIME_CEILING - 1 - 1) % 26)
    while len(out) < count:
        if _is_prime(n):
            out.append(n)
        n -= 26
    return tuple(out)


def primes(count: int) -> tuple[int, ...]:
    """The ``count`` largest primes p < 2**31 with p = 1 (mod 13)."""
    block = 16
    while block < count:
        block *= 2
    return _prime_list(block)[:count]


def primes_for_bound(bound: int, skip: int = 0) -> tuple[int, ...]:
    """Enough primes for the product to exceed 2*bound + 1 (signed lifting)."""
    need = 2 * int(bound) + 1
    k = 1
    while True:
        ps = primes(k + skip)[skip:]
        prod = 1
        for q in ps:
            prod *= q
        if prod > need:
            return ps
        k += 1


@functools.cache
def root_of_unity_13(p: int) -> int:
    for g in range(2, 200):
        w = pow(g, (p - 1) // 13, p)
        if w != 1:
            return w
    raise ValueError(f"no primitive 13th root of unity modulo {p}")


def _inverse_matrix_mod(m: list[list[int]], p: int) -> list[list[int]]:
    n = len(m)
    aug = [row[:] + [int(i == j) for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col] % p)
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = pow(aug[col][col], -1, p)
        aug[col] = [x * inv % p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [(x - f * y) % p for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


class LaneMap:
    """Power-basis coordinates <-> values at the embeddings into F_p."""

    def __init__(self, spec: FieldSpec):
        if spec == QQ:
            self.degree, self.lanes = 1, 1
        elif spec == CYC13:
            self.degree, self.lanes = 12, 12
        else:
            raise ValueError(f"no modular lanes for {spec.name}")
        self.spec = spec

    @functools.cache
    def matrices(self, p: int) -> tuple[np.ndarray, np.ndarray]:
        if self.degree == 1:
            one = np.ones((1, 1), dtype=np.int64)
            return one, one
        w = root_of_unity_13(p)
        v = [[pow(w, j * k, p) for k in range(1, 13)] for j in range(12)]
        vinv = _inverse_matrix_mod(v, p)
        return np.array(v, dtype=np.int64), np.array(vinv, dtype=np.int64)

    def zeta_images(self, p: int) -> list[int]:
        """Image of the field generator in each lane."""
        if self.degree == 1:
            return [0]
        w = root_of_unity_13(p)
        return [pow(w, k, p) for k in range(1, 13)]

    def to_lanes(self, coords: np.ndarray, p: int) -> np.ndarray:
        """(n, D) integer coordinates -> (lanes, n) residues."""
        res = residues(coords, p)
        v, _ = self.matrices(p)
        return _matmul_mod(res, v, p).T.copy()

    def from_lanes(self, images: np.ndarray, p: int) -> np.ndarray:
        """(lanes, n) residues -> (n, D) coordinate residues."""
        _, vinv = self.matrices(p)
        return _matmul_mod(np.ascontiguousarray(images.T), vinv, p)


@functools.cache
def lane_map(spec: FieldSpec) -> LaneMap:
    return LaneMap(spec)


def supports(spec: FieldSpec) -> bool:
    return spec == QQ or spec == CYC13


def residues(values: np.ndarray, p: int) -> np.ndarray:
    """Reduce an integer (possibly object-dtype) array modulo p into int64."""
    if values.dtype == object:
        return np.array(values % p, dtype=np.int64)
    return np.mod(values.astype(np.int64), p)


def _matmul_mod(x: np.ndarray, m: np.ndarray, p: int) -> np.ndarray:
    out = np.zeros((x.shape[0], m.shape[1]), dtype=np.int64)
    for j in range(m.shape[0]):
        out = (out + np.outer(x[:, j], m[j]) % p) % p
    return out


def crt_signed(res: list[np.ndarray], ps: tuple[int, ...]) -> np.ndarray:
    """Lift residues to the symmetric range of prod(ps) (Garner's algorithm)."""
    digits = [res[0].astype(np.int64)]
    for i in range(1, len(ps)):
        p = ps[i]
        # value of the mixed-radix prefix modulo p
        acc = np.zeros_like(digits[0])
        radix = 1
        for k, d in enumerate(digits):
            acc = (acc + (d % p) * radix) % p
            radix = radix * ps[k] % p
        inv = pow(radix, -1, p)
        digits.append(((res[i] - acc) % p) * inv % p)
    total = np.zeros(res[0].shape, dtype=object)
    for k in range(len(ps) - 1, -1, -1):
        total = total * ps[k] + digits[k].astype(object)
    modulus = 1
    for q in ps:
        modulus *= q
    half = modulus // 2
    return np.where(total > half, total - modulus, total)


def l1_rows(coords: np.ndarray) -> np.ndarray:
    """Per-row sum of absolute coordinates (object or int arrays)."""
    if coords.size == 0:
        return np.zeros(coords.shape[0], dtype=object)
    return np.abs(coords.astype(object)).sum(axis=1)


def _max_l1(coords: np.ndarray) -> int:
    rows = l1_rows(coords)
    return int(max(rows)) if len(rows) else 0


def exact_convolution(a: np.ndarray, b: np.ndarray, out_len: int, spec: FieldSpec) -> np.ndarray:
    """Truncated product of two series with (L, D) integer coordinate rows."""
    if out_len <= 0 or a.shape[0] == 0 or b.shape[0] == 0:
        return np.zeros((max(out_len, 0), a.shape[1]), dtype=object)
    lm = lane_map(spec)
    bound = 2 * min(a.shape[0], b.shape[0]) * _max_l1(a) * _max_l1(b)
    if bound == 0:
        return np.zeros((out_len, a.shape[1]), dtype=object)
    ps = primes_for_bound(bound)
    res = []
    for p in ps:
        out = _kernels.conv_mod(lm.to_lanes(a, p), lm.to_lanes(b, p), p, out_len)
        res.append(lm.from_lanes(out, p))
    return crt_signed(res, ps)


def exact_cyclic_convolution(a: np.ndarray, b: np.ndarray, out_len: int) -> np.ndarray:
    """Truncated product of series over Z[t]/(t^13 - 1), rows of 13 coordinates.

    Uses all thirteen evaluation points t = w^k, k = 0..12, so no reduction
    modulo the cyclotomic polynomial takes place.
    """
    if out_len <= 0 or a.shape[0] == 0 or b.shape[0] == 0:
        return np.zeros((max(out_len, 0), 13), dtype=object)
    bound = min(a.shape[0], b.shape[0]) * _max_l1(a) * _max_l1(b)
    if bound == 0:
        return np.zeros((out_len, 13), dtype=object)
    ps = primes_for_bound(bound)
    res = []
    for p in ps:
        w = root_of_unity_13(p)
        v = np.array([[pow(w, j * k, p) for k in range(13)] for j in range(13)], dtype=np.int64)
        inv13 = pow(13, -1, p)
        vinv = np.array(
            [[pow(w, (-j * k) % 13, p) * inv13 % p for j in range(13)] for k in range(13)],
            dtype=np.int64,
        )
        la = _matmul_mod(residues(a, p), v, p).T.copy()
        lb = _matmul_mod(residues(b, p), v, p).T.copy()
        out = _kernels.conv_mod(la, lb, p, out_len)
        res.append(_matmul_mod(np.ascontiguousarray(out.T), vinv, p))
    return crt_signed(res, ps)


def exact_sparse_product(ka, a: np.ndarray, kb, b: np.ndarray, cap: int, spec: FieldSpec):
    """Sparse product of integer-coordinate polynomials; returns (keys, coords)."""
    lm = lane_map(spec)
    bound = 2 * min(a.shape[0], b.shape[0]) * _max_l1(a) * _max_l1(b)
    ps = primes_for_bound(max(bound, 1))
    keys = None
    res = []
    for p in ps:
        k, out = _kernels.sparse_mul_mod(ka, lm.to_lanes(a, p), kb, lm.to_lanes(b, p), p, cap)
        if keys is None:
            keys = k
        res.append(lm.from_lanes(out, p))
    return keys, crt_signed(res, ps)


def gauss_jordan_factors(m: list[list[int]], p: int):
    """Elementary factors F_1..F_k mod p with F_1 F_2 ... F_k = m.

    Factors are ('swap', i, j), ('scale', i, c) or ('shear', i, j, c) meaning
    the matrix I + c*e_ij.  Returns None when m is singular modulo p.
    """
    n = len(m)
    a = [[x % p for x in row] for row in m]
    ops = []  # inverses of the row operations reducing a to I, in order
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            return None
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            ops.append(("swap", col, piv))
        c = a[col][col]
        if c != 1:
            inv = pow(c, -1, p)
            a[col] = [x * inv % p for x in a[col]]
            ops.append(("scale", col, c))
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [(x - f * y) % p for x, y in zip(a[r], a[col])]
                ops.append(("shear", r, col, f))
    return ops
