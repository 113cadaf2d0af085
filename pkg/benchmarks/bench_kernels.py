"""Timing comparison of the compiled kernels against the pure-numpy
fallback (selected by the STEINLAT_NO_NUMBA environment flag).

Usage::

    python3 benchmarks/bench_kernels.py            # both backends
    STEINLAT_NO_NUMBA=1 python3 benchmarks/bench_kernels.py --single

The default invocation runs the workload in-process (compiled backend
unless the flag is already set), then re-runs itself in a subprocess with
the flag set and prints both timing tables.
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np


def workload() -> list[tuple[str, float]]:
    from steinlat import build_context
    from steinlat._kernels import matmul_K, rref_K, snf_mod
    from steinlat.galoisring import GaloisRing

    tables = GaloisRing(build_context(4, 3, 2)).residue_field()
    rng = np.random.default_rng(0)
    rows = []

    M = rng.integers(0, tables.size, size=(120, 200)).astype(np.int16)
    rref_K(M[:5], tables)                       # warm-up / compile
    t0 = time.perf_counter()
    for _ in range(3):
        rref_K(M, tables)
    rows.append(("rref_K 120x200 (x3)", time.perf_counter() - t0))

    A = rng.integers(0, tables.size, size=(150, 150)).astype(np.int16)
    B = rng.integers(0, tables.size, size=(150, 150)).astype(np.int16)
    matmul_K(A[:5], B, tables)
    t0 = time.perf_counter()
    for _ in range(5):
        matmul_K(A, B, tables)
    rows.append(("matmul_K 150x150 (x5)", time.perf_counter() - t0))

    Z = rng.integers(-9, 10, size=(80, 80))
    snf_mod(Z[:4, :4], 2, 20)
    t0 = time.perf_counter()
    snf_mod(Z, 2, 30)
    rows.append(("snf_mod 80x80 mod 2^30", time.perf_counter() - t0))
    return rows


def print_table(tag: str, rows: list[tuple[str, float]]) -> None:
    print(f"\n{tag}")
    for name, secs in rows:
        print(f"  {name:<28} {secs * 1000:9.1f} ms")
    sys.stdout.flush()


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--single", action="store_true",
                    help="run only the current backend, no subprocess")
    args = ap.parse_args()

    backend = "fallback (STEINLAT_NO_NUMBA)" \
        if os.environ.get("STEINLAT_NO_NUMBA") else "numba"
    print_table(f"backend: {backend}", workload())
    if args.single:
        return 0

    env = dict(os.environ)
    env["STEINLAT_NO_NUMBA"] = "1"
    subprocess.run([sys.executable, os.path.abspath(__file__), "--single"],
                   env=env, check=True)
    return 0


if __name__ == "__main__":
    sys.exit(main())
