"""Compare the numba and numpy batched powmod kernels.

    python benchmarks/bench_kernels.py [--rows 2000] [--repeat 3]
"""
import argparse
import time

import numpy as np

from kvcert import _kernels
from kvcert.fields import field_of_order
from kvcert.polyring import is_irreducible, parse_poly

CASES = [
    (3, "T^9+2*T^6+2*T^4+2*T^3+2*T^2+1", 3**9 // 2),
    (4, "T^5+a^2*T^4+T^3+a*T^2+a^2", 341),
    (9, "T^3+T+a", 9**3 - 2),
]


def bench(use_numba: bool, rows: np.ndarray, e: int, args, repeat: int) -> float:
    _kernels.batch_powmod(rows[:2], e, *args, use_numba=use_numba)  # warm up / compile
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        _kernels.batch_powmod(rows, e, *args, use_numba=use_numba)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--rows", type=int, default=2000)
    ap.add_argument("--repeat", type=int, default=3)
    opts = ap.parse_args()
    rng = np.random.default_rng(0)
    print(f"{'q':>3} {'deg P':>5} {'rows':>6} {'numpy s':>9} {'numba s':>9} {'speedup':>8}")
    for q, text, e in CASES:
        F = field_of_order(q)
        P = parse_poly(text, F)
        if not is_irreducible(P):
            continue
        rows = rng.integers(0, q, size=(opts.rows, P.degree))
        args = (P.coeffs, F.add_table, F.mul_table, F.sub_table)
        t_np = bench(False, rows, e, args, opts.repeat)
        if _kernels.HAVE_NUMBA:
            t_nb = bench(True, rows, e, args, opts.repeat)
            print(f"{q:>3} {P.degree:>5} {opts.rows:>6} {t_np:>9.4f} {t_nb:>9.4f} {t_np / t_nb:>7.1f}x")
        else:
            print(f"{q:>3} {P.degree:>5} {opts.rows:>6} {t_np:>9.4f} {'n/a':>9} {'':>8}")


if __name__ == "__main__":
    main()
