"""Modular arithmetic kernels.

Every kernel works on int64 arrays of residues modulo a prime p < 2**31, so
single products fit in 63 bits.  The leading axis of a coefficient array is
the "lane" axis: one lane per field embedding into F_p (see _multimod).

Two implementations exist for each kernel: a numba-compiled loop and a
vectorised numpy fallback.  The backend is chosen once at import time from the
environment variable ``X13VERIFY_KERNELS`` (``numba`` or ``numpy``); numba is
the default when it can be imported.
"""

from __future__ import annotations

import os

import numpy as np

_requested = os.environ.get("X13VERIFY_KERNELS", "numba").strip().lower()
if _requested not in ("numba", "numpy"):
    raise ImportError(f"X13VERIFY_KERNELS must be 'numba' or 'numpy', got {_requested!r}")

try:
    if _requested != "numba":
        raise ImportError
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - depends on the environment
    HAVE_NUMBA = False

BACKEND = "numba" if HAVE_NUMBA else "numpy"


# -- truncated convolution ------------------------------------------------------


def _conv_mod_numpy(a: np.ndarray, b: np.ndarray, p: int, out_len: int) -> np.ndarray:
    lanes = a.shape[0]
    out = np.zeros((lanes, out_len), dtype=np.int64)
    la, lb = a.shape[1], b.shape[1]
    # split into 16-bit limbs so np.convolve's int64 sums cannot overflow
    a_lo, a_hi = a & 0xFFFF, a >> 16
    b_lo, b_hi = b & 0xFFFF, b >> 16
    n = min(out_len, la + lb - 1)
    if n <= 0:
        return out
    shift16 = (1 << 16) % p
    shift32 = (1 << 32) % p
    for lane in range(lanes):
        ll = np.convolve(a_lo[lane], b_lo[lane])[:n] % p
        mid = (np.convolve(a_lo[lane], b_hi[lane])[:n] + np.convolve(a_hi[lane], b_lo[lane])[:n]) % p
        hh = np.convolve(a_hi[lane], b_hi[lane])[:n] % p
        out[lane, :n] = (ll + mid * shift16 % p + hh * shift32 % p) % p
    return out


# -- sparse product ---------------------------------------------------------------


def _sparse_mul_mod_numpy(ka, a, kb, b, p, cap):
    lanes = a.shape[0]
    if ka.size == 0 or kb.size == 0:
        return np.zeros(0, dtype=np.int64), np.zeros((lanes, 0), dtype=np.int64)
    chunk = max(1, 2_000_000 // max(kb.size, 1))
    key_parts = []
    for s in range(0, ka.size, chunk):
        key_parts.append((ka[s : s + chunk, None] + kb[None, :]).ravel())
    keys = np.unique(np.concatenate(key_parts))
    out = np.zeros((lanes, keys.size), dtype=np.int64)
    for s in range(0, ka.size, chunk):
        pk = (ka[s : s + chunk, None] + kb[None, :]).ravel()
        pos = np.searchsorted(keys, pk)
        for lane in range(lanes):
            vals = (a[lane, s : s + chunk, None] * b[lane, None, :]).ravel() % p
            acc = np.zeros(keys.size, dtype=np.int64)
            np.add.at(acc, pos, vals)
            out[lane] = (out[lane] + acc % p) % p
    return keys, out


# -- one elementary shear z_i -> z_i + c z_j on a dense homogeneous array ------------


def _shear_mod_numpy(coef, expi, move, binom, c, p):
    out = coef.copy()
    nz = np.nonzero(coef)[0]
    if nz.size == 0 or c == 0:
        return out
    v = coef[nz]
    a = expi[nz]
    cur = nz.copy()
    ck = 1
    for k in range(1, int(a.max()) + 1):
        keep = a >= k
        cur, v, a = cur[keep], v[keep], a[keep]
        cur = move[cur].astype(np.int64)
        ck = ck * c % p
        add = (v * binom[a, k] % p) * ck % p
        np.add.at(out, cur, add)
        out %= p
    return out


if HAVE_NUMBA:

    @njit(cache=True)
    def _conv_mod_numba(a, b, p, out_len):
        lanes = a.shape[0]
        la = a.shape[1]
        lb = b.shape[1]
        out = np.zeros((lanes, out_len), dtype=np.int64)
        for lane in range(lanes):
            for i in range(la):
                ai = a[lane, i]
                if ai == 0:
                    continue
                top = min(lb, out_len - i)
                for j in range(top):
                    out[lane, i + j] = (out[lane, i + j] + ai * b[lane, j]) % p
        return out

    @njit(cache=True)
    def _sparse_mul_mod_numba(ka, a, kb, b, p, cap):
        lanes = a.shape[0]
        size = 1
        while size < 2 * cap:
            size *= 2
        mask = size - 1
        table = np.full(size, -1, dtype=np.int64)
        slot_of = np.empty(size, dtype=np.int64)
        acc = np.zeros((lanes, size), dtype=np.int64)
        used = 0
        order = np.empty(size, dtype=np.int64)
        for i in range(ka.size):
            for j in range(kb.size):
                key = ka[i] + kb[j]
                h = (np.uint64(key) * np.uint64(0x9E3779B97F4A7C15)) >> np.uint64(20)
                s = np.int64(h) & mask
                while table[s] != -1 and table[s] != key:
                    s = (s + 1) & mask
                if table[s] == -1:
                    if used >= size // 2:
                        raise ValueError("sparse product table overflow")
                    table[s] = key
                    order[used] = s
                    used += 1
                for lane in range(lanes):
                    acc[lane, s] = (acc[lane, s] + a[lane, i] * b[lane, j]) % p
        keys = np.empty(used, dtype=np.int64)
        for u in range(used):
            keys[u] = table[order[u]]
        perm = np.argsort(keys)
        out_keys = np.empty(used, dtype=np.int64)
        out = np.empty((lanes, used), dtype=np.int64)
        for u in range(used):
            s = order[perm[u]]
            out_keys[u] = table[s]
            for lane in range(lanes):
                out[lane, u] = acc[lane, s]
        return out_keys, out

    @njit(cache=True)
    def _shear_mod_numba(coef, expi, move, binom, c, p):
        out = coef.copy()
        if c == 0:
            return out
        for idx in range(coef.size):
            v = coef[idx]
            if v == 0:
                continue
            a = expi[idx]
            cur = idx
            ck = 1
            for k in range(1, a + 1):
                cur = move[cur]
                ck = ck * c % p
                out[cur] = (out[cur] + (v * binom[a, k] % p) * ck) % p
        return out


def conv_mod(a: np.ndarray, b: np.ndarray, p: int, out_len: int) -> np.ndarray:
    """Per-lane truncated product of dense residue arrays of shape (lanes, L)."""
    a = np.ascontiguousarray(a, dtype=np.int64)
    b = np.ascontiguousarray(b, dtype=np.int64)
    if HAVE_NUMBA:
        return _conv_mod_numba(a, b, np.int64(p), int(out_len))
    return _conv_mod_numpy(a, b, int(p), int(out_len))


def sparse_mul_mod(ka, a, kb, b, p: int, cap: int):
    """Product of two sparse polynomials given by packed monomial keys.

    Keys must be packed so that adding keys multiplies monomials.  ``cap``
    bounds the number of distinct output monomials.  Returns sorted keys and a
    (lanes, m) residue array; monomials whose coefficient vanishes are kept.
    """
    ka = np.ascontiguousarray(ka, dtype=np.int64)
    kb = np.ascontiguousarray(kb, dtype=np.int64)
    a = np.ascontiguousarray(a, dtype=np.int64)
    b = np.ascontiguousarray(b, dtype=np.int64)
    cap = max(1, min(int(cap), ka.size * kb.size))
    if HAVE_NUMBA:
        return _sparse_mul_mod_numba(ka, a, kb, b, np.int64(p), cap)
    return _sparse_mul_mod_numpy(ka, a, kb, b, int(p), cap)


def shear_mod(coef, expi, move, binom, c: int, p: int) -> np.ndarray:
    """Apply z_i -> z_i + c*z_j to one lane of a dense homogeneous polynomial.

    ``expi`` holds the exponent of z_i per monomial and ``move`` maps a monomial
    index to the index with one unit moved from z_i to z_j.
    """
    if HAVE_NUMBA:
        return _shear_mod_numba(coef, expi, move, binom, np.int64(c), np.int64(p))
    return _shear_mod_numpy(coef, expi, move, binom, int(c), int(p))
