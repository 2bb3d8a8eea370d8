#!/usr/bin/env python3
"""Compare the numba and numpy kernel backends on the same instances.

The backend is fixed when the package is imported, so each measurement
runs in a fresh subprocess with CCEQR_BACKEND set. Prints median
factorization times per (instance, algorithm) side by side.

Usage: python benchmarks/compare_backends.py [--trials 5] [--quick]
"""

import argparse
import json
import os
import subprocess
import sys

CASES = [
    ("gaussian m=64 n=16384 k=64", "gaussian", dict(m=64, n=16384, k=64)),
    ("gaussian m=64 n=32768 k=64", "gaussian", dict(m=64, n=32768, k=64)),
    ("hadamard kexp=5 rexp=13", "hadamard", dict(kexp=5, rexp=13, k=32, rho=0.02)),
    ("mixture m=20 n=200000 ell=6", "mixture", dict(m=20, n=200000, k=20)),
]
QUICK_CASES = [
    ("gaussian m=32 n=4096 k=32", "gaussian", dict(m=32, n=4096, k=32)),
    ("hadamard kexp=4 rexp=10", "hadamard", dict(kexp=4, rexp=10, k=16, rho=0.02)),
]


def worker(spec_json, trials):
    import time

    import numpy as np

    import cceqr

    spec = json.loads(spec_json)
    family = spec.pop("family")
    k = spec.pop("k")
    rho = spec.pop("rho", 0.05)
    if family == "gaussian":
        A = cceqr.gen_gaussian(spec["m"], spec["n"], seed=1)
    elif family == "hadamard":
        A = cceqr.gen_hadamard_adversary(spec["kexp"], spec["rexp"])
    else:
        A = cceqr.gen_mixture_eigvecs(
            cceqr.MixtureSpec(m=spec["m"], n=spec["n"], ell=6.0, seed=1)
        )

    def median_time(fn):
        times = []
        for _ in range(trials):
            t0 = time.perf_counter()
            fn()
            times.append(time.perf_counter() - t0)
        return float(np.median(times))

    out = {
        "backend": cceqr.BACKEND,
        "gb": median_time(lambda: cceqr.gb_qr(A, k)),
        "cceqr": median_time(lambda: cceqr.cceqr(A, k, rho)),
    }
    print(json.dumps(out))


def run_case(backend, family, params, trials):
    env = dict(os.environ, CCEQR_BACKEND=backend)
    spec = json.dumps(dict(params, family=family))
    proc = subprocess.run(
        [sys.executable, __file__, "--worker", spec, "--trials", str(trials)],
        capture_output=True,
        text=True,
        env=env,
    )
    if proc.returncode != 0:
        raise RuntimeError(f"worker failed for {backend}: {proc.stderr}")
    return json.loads(proc.stdout.strip().splitlines()[-1])


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--worker", help=argparse.SUPPRESS)
    parser.add_argument("--trials", type=int, default=5)
    parser.add_argument("--quick", action="store_true", help="small instances only")
    args = parser.parse_args()
    if args.worker:
        worker(args.worker, args.trials)
        return

    cases = QUICK_CASES if args.quick else CASES
    print(f"{'instance':<34} {'algo':<6} {'numba (s)':>10} {'numpy (s)':>10} {'speedup':>8}")
    for label, family, params in cases:
        results = {b: run_case(b, family, params, args.trials) for b in ("numba", "numpy")}
        for algo in ("gb", "cceqr"):
            tn = results["numba"][algo]
            tp = results["numpy"][algo]
            print(f"{label:<34} {algo:<6} {tn:>10.4f} {tp:>10.4f} {tp / tn:>7.2f}x")


if __name__ == "__main__":
    main()
