"""Compare the compiled and pure-Python search kernels on a few exact searches.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""
from __future__ import annotations

import argparse
import time

from rforb.kernels import available_backends
from rforb.matrix import build_block, build_identity, build_Kk, multiply
from rforb.solver import enumerate_optima, forb_exact

CASES = [
    ("forb(3,3,K2)", lambda be: forb_exact(3, 3, build_Kk(2), backend=be, formula_bounds=False).optimum),
    ("forb(3,3,2*K1)", lambda be: forb_exact(3, 3, multiply(2, build_Kk(1)), backend=be, formula_bounds=False).optimum),
    ("forb(4,3,I2)", lambda be: forb_exact(4, 3, build_identity(2), backend=be, formula_bounds=False).optimum),
    ("forb(3,4,block(1,1,2))", lambda be: forb_exact(3, 4, build_block(1, 1, 2), backend=be, formula_bounds=False).optimum),
    ("optima(3,3,I2)", lambda be: len(enumerate_optima(3, 3, build_identity(2), backend=be))),
]


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = available_backends()
    print(f"{'case':26}" + "".join(f"{b:>14}" for b in backends) + "   speedup   result")
    for name, fn in CASES:
        times, results = {}, set()
        for be in backends:
            best = float("inf")
            for _ in range(args.repeat):
                t0 = time.perf_counter()
                results.add(fn(be))
                best = min(best, time.perf_counter() - t0)
            times[be] = best
        speed = times["python"] / times["cython"] if "cython" in times else float("nan")
        agree = results.pop() if len(results) == 1 else f"MISMATCH {sorted(results)}"
        print(f"{name:26}" + "".join(f"{times[b]:13.4f}s" for b in backends) + f"   {speed:7.1f}x   {agree}")


if __name__ == "__main__":
    main()
