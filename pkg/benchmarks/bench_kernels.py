"""Time each hot kernel under numba and under the pure-numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5] [--json out.json]

Both implementations are called directly, so the ``PBTV_DISABLE_NUMBA``
flag does not matter here.  The first numba call (compilation, or loading
the on-disk cache) is excluded from the timings.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from pbtv import _kernels as K


def best_of(fn, args, repeat: int) -> float:
    fn(*args)
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times)


def cases(rng):
    p16, q16 = rng.random(16), rng.random(16)
    w = K.pb_pmf_numpy(np.full(120, 0.4))
    rows_i, rows_j = K.binom_rows_numpy(120, 0.3), K.binom_rows_numpy(120, 0.7)
    return [
        ("pb_pmf n=200", "pb_pmf", (rng.random(200),)),
        ("pb_pmf n=10000", "pb_pmf", (rng.random(10_000),)),
        ("binom_rows n=300", "binom_rows", (300, 0.37)),
        ("product_tv n=16", "product_tv", (p16, q16)),
        ("pb_pmf_enum n=16", "pb_pmf_enum", (p16,)),
        ("mix_convolve n=120", "mix_convolve", (w, rows_i, rows_j)),
        ("binom_tv_family m=500", "binom_tv_family", (500, 0.41, 0.47)),
    ]


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--json", help="also write the results to this file")
    args = ap.parse_args(argv)
    if not K.NUMBA_AVAILABLE:
        print("numba is not importable; only the numpy path can run", file=sys.stderr)
        return 1
    rng = np.random.default_rng(args.seed)
    results = []
    print(f"{'kernel':<26}{'numpy [ms]':>12}{'numba [ms]':>12}{'speedup':>10}")
    for label, name, fargs in cases(rng):
        t_np = best_of(getattr(K, f"{name}_numpy"), fargs, args.repeat)
        t_nb = best_of(getattr(K, f"{name}_numba"), fargs, args.repeat)
        results.append({"kernel": label, "numpy_s": t_np, "numba_s": t_nb})
        print(f"{label:<26}{t_np * 1e3:>12.3f}{t_nb * 1e3:>12.3f}{t_np / t_nb:>9.1f}x")
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(results, fh, indent=2)
    return 0


if __name__ == "__main__":
    sys.exit(main())
