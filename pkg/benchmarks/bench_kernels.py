#!/usr/bin/env python3
"""Benchmark the compiled polynomial kernels against the pure fallback.

Times the inner-loop operations (multiply, remainder, gcd, Frobenius
power) on Hasse-polynomial-sized inputs, plus one end-to-end locus
enumeration per backend (the fallback is selected in a subprocess via
HECKEDIST_PURE_PYTHON=1).

Run:  python3 benchmarks/bench_kernels.py
"""

import os
import random
import subprocess
import sys
import time

from heckedist import kernels


def rand_poly(rng, p, deg):
    c = [rng.randrange(p) for _ in range(deg)] + [1]
    return c

def bench(fn, repeat=5):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    impls = kernels.implementations()
    if "compiled" not in impls:
        print("compiled kernel not built; showing the fallback only")
    rng = random.Random(0)
    cases = [(1009, 504), (2003, 1001), (2999, 1499)]
    print(f"{'op':<28} {'p':>6} {'deg':>5} " + " ".join(f"{n:>12}" for n in impls))
    for p, deg in cases:
        a = rand_poly(rng, p, deg)
        b = rand_poly(rng, p, deg)
        m = rand_poly(rng, p, deg)
        rows = [
            ("mul", lambda impl: impl.mul(a, b, p)),
            ("rem(a*b, m)", lambda impl, ab=None: impl.rem(impl.mul(a, b, p), m, p)),
            ("powmod(x, p^2, m)", lambda impl: impl.powmod([0, 1], p * p, m, p)),
            ("gcd(a, b)", lambda impl: impl.gcd(a, b, p)),
        ]
        for name, op in rows:
            times = {n: bench(lambda impl=impl: op(impl)) for n, impl in impls.items()}
            cells = " ".join(f"{times[n]*1e3:>10.2f}ms" for n in impls)
            print(f"{name:<28} {p:>6} {deg:>5} {cells}")
    print()
    print("end-to-end locus enumeration (p = 1009):")
    script = "from heckedist.supersingular import enumerate_locus; enumerate_locus(1009)"
    for label, env_extra in (("compiled", {}), ("pure-python", {"HECKEDIST_PURE_PYTHON": "1"})):
        if label == "compiled" and "compiled" not in impls:
            continue
        env = dict(os.environ, **env_extra)
        t0 = time.perf_counter()
        subprocess.run([sys.executable, "-c", script], check=True, env=env)
        print(f"  {label:<12} {time.perf_counter() - t0:6.2f} s (includes interpreter start-up)")


if __name__ == "__main__":
    main()
