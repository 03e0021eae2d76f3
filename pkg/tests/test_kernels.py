import json
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from x13verify import _kernels as K
from x13verify import _multimod as M
from x13verify.cycfield import CYC13

P = M.primes(1)[0]


def _naive_conv(a, b, p, n):
    out = np.zeros((a.shape[0], n), dtype=object)
    for i in range(a.shape[1]):
        for j in range(b.shape[1]):
            if i + j < n:
                out[:, i + j] += a[:, i].astype(object) * b[:, j].astype(object)
    return (out % p).astype(np.int64)


@settings(max_examples=30)
@given(st.integers(1, 3), st.integers(1, 12), st.integers(1, 12), st.integers(0, 2**16))
def test_conv_mod_matches_naive(lanes, la, lb, seed):
    rng = np.random.default_rng(seed)
    a = rng.integers(0, P, size=(lanes, la))
    b = rng.integers(0, P, size=(lanes, lb))
    n = la + lb - 1
    assert np.array_equal(K.conv_mod(a, b, P, n), _naive_conv(a, b, P, n))


@pytest.mark.skipif(not K.HAVE_NUMBA, reason="numba not importable")
def test_numba_and_numpy_kernels_agree():
    rng = np.random.default_rng(1)
    a = rng.integers(0, P, size=(4, 50))
    b = rng.integers(0, P, size=(4, 70))
    assert np.array_equal(K._conv_mod_numba(a, b, np.int64(P), 100), K._conv_mod_numpy(a, b, P, 100))
    ka = np.sort(rng.choice(1000, 30, replace=False)).astype(np.int64)
    kb = np.sort(rng.choice(1000, 20, replace=False)).astype(np.int64)
    sa = rng.integers(0, P, size=(3, 30))
    sb = rng.integers(0, P, size=(3, 20))
    k1, v1 = K._sparse_mul_mod_numba(ka, sa, kb, sb, np.int64(P), 600)
    k2, v2 = K._sparse_mul_mod_numpy(ka, sa, kb, sb, P, 600)
    assert np.array_equal(k1, k2) and np.array_equal(v1, v2)


def test_primes_are_13_friendly():
    for p in M.primes(5):
        assert p % 26 == 1 and p < 2**31
        w = M.root_of_unity_13(p)
        assert w != 1 and pow(w, 13, p) == 1


@given(st.lists(st.integers(-(10**30), 10**30), min_size=1, max_size=8))
def test_crt_roundtrip(values):
    bound = max(abs(v) for v in values) * 2 + 1
    ps = M.primes_for_bound(bound)
    arr = np.array(values, dtype=object)
    res = [np.array([v % p for v in values], dtype=np.int64) for p in ps]
    assert list(M.crt_signed(res, ps)) == values


def test_lane_map_roundtrip():
    lm = M.lane_map(CYC13)
    coords = np.array([[1, -2, 3, 0, 0, 5, 0, 0, -7, 0, 1, 2]], dtype=object)
    lanes = lm.to_lanes(coords, P)
    back = lm.from_lanes(lanes, P)
    assert list(M.crt_signed([back], (P,))[0]) == list(coords[0])


def test_exact_convolution_matches_object_convolve():
    rng = np.random.default_rng(3)
    a = rng.integers(-50, 50, size=(20, 12)).astype(object)
    b = rng.integers(-50, 50, size=(15, 12)).astype(object)
    got = M.exact_convolution(a, b, 25, CYC13)
    # compare through field elements
    for n in (0, 7, 24):
        want = CYC13.zero
        for i in range(max(0, n - 14), min(n, 19) + 1):
            want = want + CYC13.element(list(a[i])) * CYC13.element(list(b[n - i]))
        assert CYC13.element(list(got[n])) == want


def test_invalid_backend_rejected():
    env = dict(os.environ, X13VERIFY_KERNELS="fortran")
    proc = subprocess.run([sys.executable, "-c", "import x13verify._kernels"], env=env, capture_output=True, text=True)
    assert proc.returncode != 0 and "X13VERIFY_KERNELS" in proc.stderr


def test_full_suite_under_numpy_backend():
    env = dict(os.environ, X13VERIFY_KERNELS="numpy")
    code = (
        "import json; from x13verify import verify as V, _kernels as K;"
        "r = V.run_suite({'suite': 'all', 'order': 10, 'seed': 7});"
        "print(json.dumps([K.BACKEND, [x.status for x in r.results]]))"
    )
    proc = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, timeout=600)
    assert proc.returncode == 0, proc.stderr
    backend, statuses = json.loads(proc.stdout.strip().splitlines()[-1])
    assert backend == "numpy"
    assert statuses and all(s == "pass" for s in statuses)
