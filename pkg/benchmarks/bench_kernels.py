"""Benchmark the numba kernels against the pure-numpy fallback.

Each workload runs in a subprocess with CAPKIT_NUMBA set accordingly, so
the backend choice is made fresh (it is resolved once per process).  The
numba timing excludes JIT compilation via an untimed warmup call.

Usage: python benchmarks/bench_kernels.py
"""

import json
import os
import subprocess
import sys

_WORKER = r"""
import json, sys, time
import numpy as np
from capkit.groups import construct_group
from capkit.homology import _differentials
from capkit.kernels import backend_name, column_echelon, snf_diagonal

rng = np.random.default_rng(20260823)

def d2(spec):
    # bar-resolution boundary matrices are the hot real-world input:
    # large, sparse, entries in {-2,...,2}
    return _differentials(construct_group(spec), True)[1].tolist()

def sparse(n, m):
    a = np.zeros((n, m), dtype=np.int64)
    k = 3 * m
    a[rng.integers(0, n, k), rng.integers(0, m, k)] = \
        rng.integers(-3, 4, k)
    return a.tolist()

work = {
    "snf d2(C4xC4) 225x225": (snf_diagonal, [d2("cyclic:4 x cyclic:4")]),
    "snf sparse 120x180": (snf_diagonal, [sparse(120, 180) for _ in range(3)]),
    "echelon d2(D8) 225x225": (lambda a: column_echelon(a),
                               [d2("dihedral:8")]),
    "echelon+transforms d2(D6) 121x121":
        (lambda a: column_echelon(a, transforms=True), [d2("dihedral:6")]),
}

# warmup (JIT compile / cache load), untimed
for fn, cases in work.values():
    fn(cases[0])

out = {"backend": backend_name(), "results": {}}
for name, (fn, cases) in work.items():
    t0 = time.perf_counter()
    for a in cases:
        fn(a)
    out["results"][name] = (time.perf_counter() - t0) / len(cases)
print(json.dumps(out))
"""


def run(flag):
    env = dict(os.environ, CAPKIT_NUMBA=flag)
    res = subprocess.run([sys.executable, "-c", _WORKER], env=env,
                         capture_output=True, text=True, check=True)
    return json.loads(res.stdout)


def main():
    fast = run("1")
    slow = run("0")
    print(f"backends: {fast['backend']} vs {slow['backend']}\n")
    print(f"{'workload':<28}{fast['backend']:>12}{slow['backend']:>12}"
          f"{'speedup':>10}")
    for name in fast["results"]:
        a = fast["results"][name]
        b = slow["results"][name]
        print(f"{name:<28}{a * 1000:>10.2f}ms{b * 1000:>10.2f}ms"
              f"{b / a:>9.2f}x")


if __name__ == "__main__":
    main()
