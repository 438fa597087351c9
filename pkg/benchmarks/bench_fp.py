"""Compare the compiled prime-field kernel against the pure-Python twin.

Run:  python3 benchmarks/bench_fp.py [--sizes 40,80,160] [--prime 101]

Both implementations are imported directly (no ARRCOH_PURE needed) and
checked for agreement on every input before timing.
"""

from __future__ import annotations

import argparse
import random
import time

from arrcoh import _fp_py

try:
    from arrcoh import _fp_c
except ImportError:
    _fp_c = None


def _time(fn, rows, p, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(rows, p)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", default="40,80,160")
    ap.add_argument("--prime", type=int, default=101)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()

    if _fp_c is None:
        print("compiled kernel not built; nothing to compare")
        return

    rng = random.Random(args.seed)
    p = args.prime
    print(f"prime {p}, square matrices, best of {args.repeats}")
    print(f"{'n':>5} {'pure rank':>12} {'cython rank':>12} {'speedup':>8}   {'pure kern':>12} {'cython kern':>12} {'speedup':>8}")
    for n in (int(s) for s in args.sizes.split(",")):
        rows = [[rng.randrange(p) for _ in range(n)] for _ in range(n)]
        assert _fp_py.fp_rank(rows, p) == _fp_c.fp_rank(rows, p)
        assert _fp_py.fp_kernel(rows, p) == _fp_c.fp_kernel(rows, p)
        tr_py = _time(_fp_py.fp_rank, rows, p, args.repeats)
        tr_c = _time(_fp_c.fp_rank, rows, p, args.repeats)
        tk_py = _time(_fp_py.fp_kernel, rows, p, args.repeats)
        tk_c = _time(_fp_c.fp_kernel, rows, p, args.repeats)
        print(
            f"{n:>5} {tr_py * 1e3:>10.2f}ms {tr_c * 1e3:>10.2f}ms {tr_py / tr_c:>7.1f}x"
            f"   {tk_py * 1e3:>10.2f}ms {tk_c * 1e3:>10.2f}ms {tk_py / tk_c:>7.1f}x"
        )


if __name__ == "__main__":
    main()
