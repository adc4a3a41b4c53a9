"""Compiled vs pure-Python kernels.

    python benchmarks/bench_kernels.py [--repeat 5]
"""

from __future__ import annotations

import argparse
import random
import timeit

from padicred import _kernels_py

try:
    from padicred import _kernels
except ImportError:  # extension not built
    _kernels = None


def cases(rng: random.Random):
    a16 = tuple(rng.randrange(2) for _ in range(16))
    b16 = tuple(rng.randrange(2) for _ in range(16))
    a64 = tuple(rng.randrange(3) for _ in range(64))
    b64 = tuple(rng.randrange(3) for _ in range(64))
    red = (2, 0, 0, 0, 0, 0)  # π^6 = 2 (E = t^6 - 2)
    x6 = tuple(rng.randrange(4) for _ in range(6))
    y6 = tuple(rng.randrange(4) for _ in range(6))
    return [
        ("tp_mul p=2 N=16", lambda K: K.tp_mul(a16, b16, 2), 2000),
        ("tp_mul p=3 N=64", lambda K: K.tp_mul(a64, b64, 3), 200),
        ("tp_pow p=3 N=64 e=27", lambda K: K.tp_pow(a64, 27, 3), 50),
        ("ok_mul n=6 q=4", lambda K: K.ok_mul(x6, y6, red, 4), 5000),
        ("bf_divp p=2 N=16 (1,3)", lambda K: K.bf_divp(2, 16, 1, 3), 1),
        ("bf_divp p=3 N=10 (1,2)", lambda K: K.bf_divp(3, 10, 1, 2), 1),
    ]


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    backends = [("python", _kernels_py)] + ([("cython", _kernels)] if _kernels else [])
    print(f"{'kernel':<26}" + "".join(f"{name:>14}" for name, _ in backends) + ("   speedup" if _kernels else ""))
    for label, fn, number in cases(random.Random(0)):
        times = []
        for _, K in backends:
            best = min(timeit.repeat(lambda: fn(K), number=number, repeat=args.repeat)) / number
            times.append(best)
        row = f"{label:<26}" + "".join(f"{t * 1e6:>12.1f}us" for t in times)
        if len(times) == 2:
            row += f"  {times[0] / times[1]:>7.1f}x"
        print(row)
    if _kernels is None:
        print("compiled extension not built; only the fallback was timed")


if __name__ == "__main__":
    main()
