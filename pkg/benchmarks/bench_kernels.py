"""Time the compiled Monte Carlo kernels against the NumPy fallback.

    python benchmarks/bench_kernels.py --trials 100000 --n 64
"""

import argparse
import timeit
from fractions import Fraction

import numpy as np

from arithcode import _pykernels
from arithcode.kernels import stream_key

try:
    from arithcode import _ckernels
except ImportError:
    _ckernels = None


def bench(impl, key, trials, n, thr, q, repeat):
    def run():
        impl.encode_float(key, 0, trials, n, thr, q)

    return min(timeit.repeat(run, number=1, repeat=repeat))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=100_000)
    ap.add_argument("--n", type=int, default=64)
    ap.add_argument("--p", default="1/3")
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    p = Fraction(args.p)
    thr = (p.numerator << 53) // p.denominator
    q = float(1 - p)
    key = stream_key(42, 0)

    impls = [_pykernels] + ([_ckernels] if _ckernels else [])
    times = {}
    for impl in impls:
        times[impl.BACKEND] = bench(impl, key, args.trials, args.n, thr, q, args.repeat)
        rate = args.trials * args.n / times[impl.BACKEND] / 1e6
        print(f"{impl.BACKEND:>7}: {times[impl.BACKEND]:.4f} s  ({rate:.1f} M symbols/s)")

    if _ckernels is None:
        print("compiled extension not built; only the fallback was timed")
        return
    a = _pykernels.encode_float(key, 0, args.trials, args.n, thr, q)
    b = _ckernels.encode_float(key, 0, args.trials, args.n, thr, q)
    same = all(np.array_equal(u, v) for u, v in zip(a, b))
    print(f"speedup: {times['numpy'] / times['cython']:.1f}x, outputs identical: {same}")


if __name__ == "__main__":
    main()
