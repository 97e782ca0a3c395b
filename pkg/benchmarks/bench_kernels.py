"""Compare the compiled and pure-Python kernels.

Two measurements: the raw term-list kernels on random polynomials, and a
whole standard basis computation run in a subprocess with each backend.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import os
import random
import subprocess
import sys
import timeit

import gmpy2

from legreuel import _pykernels

try:
    from legreuel import _ckernels
except ImportError:
    _ckernels = None

WORKLOAD = """
import time
from legreuel import kernels
from legreuel.ring import RingSpec, GLOBAL
from legreuel.stdbasis import Ideal
from legreuel.ideal_ops import vdim
n = 6
R = RingSpec(tuple(f"u{i}" for i in range(n)), GLOBAL)
u = R.gens()
U = lambda i: u[abs(i)] if abs(i) < n else R.zero()
eqs = [sum((U(i) for i in range(-n + 1, n)), R.zero()) - 1]
for m in range(n - 1):
    eqs.append(sum((U(i) * U(m - i) for i in range(-n + 1, n)), R.zero()) - U(m))
T = time.perf_counter()
v = vdim(Ideal(R, eqs))
print(kernels.BACKEND, v, time.perf_counter() - T)
"""


def random_terms(rng, n, nvars=4):
    ring_terms = {}
    for _ in range(n):
        exps = tuple(rng.randint(0, 6) for _ in range(nvars))
        key = sum(e << (16 * i) for i, e in enumerate(exps))
        ring_terms[key] = (key, key, gmpy2.mpq(rng.randint(-99, 99) or 1, rng.randint(1, 9)))
    return sorted(ring_terms.values(), reverse=True)


def bench_kernels(mod, repeat):
    rng = random.Random(1)
    p, q = random_terms(rng, 300), random_terms(rng, 300)
    c = gmpy2.mpq(3, 7)
    packs = [t[1] for t in q]
    out = {}
    out["sub_mul_terms"] = min(timeit.repeat(
        lambda: mod.sub_mul_terms(p, q, c, 5, 5), number=200, repeat=repeat))
    out["mul_terms"] = min(timeit.repeat(
        lambda: mod.mul_terms(p[:60], q[:60]), number=20, repeat=repeat))
    out["find_divisor"] = min(timeit.repeat(
        lambda: mod.find_divisor(1 << 62, packs, 1 << 63), number=500, repeat=repeat))
    return out


def run_workload(pure):
    env = dict(os.environ)
    env.pop("LEGREUEL_PURE_PYTHON", None)
    if pure:
        env["LEGREUEL_PURE_PYTHON"] = "1"
    res = subprocess.run([sys.executable, "-c", WORKLOAD], env=env,
                         capture_output=True, text=True, check=True)
    backend, value, seconds = res.stdout.split()
    return backend, int(value), float(seconds)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    py = bench_kernels(_pykernels, args.repeat)
    cy = bench_kernels(_ckernels, args.repeat) if _ckernels else None
    print(f"{'kernel':<16}{'python s':>12}{'cython s':>12}{'speedup':>10}")
    for name, t in py.items():
        if cy:
            print(f"{name:<16}{t:>12.4f}{cy[name]:>12.4f}{t / cy[name]:>9.2f}x")
        else:
            print(f"{name:<16}{t:>12.4f}{'n/a':>12}")
    results = [run_workload(True)] + ([run_workload(False)] if cy else [])
    for backend, value, seconds in results:
        print(f"katsura-6 Groebner basis [{backend}]: vdim={value} in {seconds:.3f} s")
    if len(results) == 2:
        assert results[0][1] == results[1][1], "backends disagree"
        print(f"end-to-end speedup: {results[0][2] / results[1][2]:.2f}x")


if __name__ == "__main__":
    main()
