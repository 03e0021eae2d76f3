"""Compare the numba and numpy kernel backends on representative workloads.

Each backend runs in its own interpreter because the backend is fixed at
import time.  Usage: python3 benchmarks/bench_kernels.py [--repeat N]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, random, sys, time
import numpy as np
from x13verify import _kernels, _multimod
from x13verify.cycfield import CYC13
from x13verify.polyring import SparsePolynomial, SquareMatrix, _multiply_kernel, _substitute_kernel
from x13verify import forms as F

repeat = int(sys.argv[1])
rng = random.Random(7)

def rand_poly(nterms, deg):
    terms = {}
    while len(terms) < nterms:
        e = [0] * 6
        for _ in range(deg):
            e[rng.randrange(6)] += 1
        terms[tuple(e)] = CYC13.element([rng.randint(-9, 9) for _ in range(12)])
    return SparsePolynomial(6, CYC13, terms)

a, b = rand_poly(400, 6), rand_poly(400, 6)
w = F.build_root_family("w")[3]
m = F.generator_matrix("S")
p = 2147483647
lanes = np.array([[rng.randrange(p) for _ in range(4000)] for _ in range(12)], dtype=np.int64)

def best(fn):
    fn()  # warm-up (includes JIT compilation or cache load)
    times = []
    for _ in range(repeat):
        t = time.perf_counter(); fn(); times.append(time.perf_counter() - t)
    return min(times)

out = {
    "backend": _kernels.BACKEND,
    "sparse product 400x400 terms, degree 6, Q(zeta13)": best(lambda: _multiply_kernel(a, b)),
    "substitution w_3 o S (quartic, 126 terms)": best(lambda: _substitute_kernel(w, m)),
    "convolution 12 lanes x 4000": best(lambda: _kernels.conv_mod(lanes, lanes, p, 4000)),
}
print(json.dumps(out))
"""


def run(backend: str, repeat: int) -> dict:
    env = dict(os.environ, X13VERIFY_KERNELS=backend)
    proc = subprocess.run([sys.executable, "-c", WORKER, str(repeat)], env=env, capture_output=True, text=True, check=True)
    return json.loads(proc.stdout.strip().splitlines()[-1])


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    results = [run(b, args.repeat) for b in ("numba", "numpy")]
    keys = [k for k in results[0] if k != "backend"]
    width = max(len(k) for k in keys)
    print(f"{'workload':{width}s}  {'numba':>10s}  {'numpy':>10s}  {'speedup':>8s}")
    for k in keys:
        tn, tp = results[0][k], results[1][k]
        print(f"{k:{width}s}  {tn * 1000:8.1f}ms  {tp * 1000:8.1f}ms  {tp / tn:7.1f}x")
    if results[0]["backend"] != "numba":
        print("note: numba is not importable here, both columns used the numpy backend")


if __name__ == "__main__":
    main()
