"""Time the compiled and pure-Python relation kernels on random relations.

    python3 benchmarks/bench_kernels.py [--sizes 16 64 256] [--repeat 5]
"""

from __future__ import annotations

import argparse
import random
import timeit

from relkit.relalg import _pykernels

try:
    from relkit.relalg import _ckernels
except ImportError:
    _ckernels = None


def random_rows(rng: random.Random, n: int, density: float) -> tuple[int, ...]:
    return tuple(sum(1 << j for j in range(n) if rng.random() < density) for _ in range(n))


def bench(mod, op: str, args: tuple, repeat: int) -> float:
    fn = getattr(mod, op)
    return min(timeit.repeat(lambda: fn(*args), number=1, repeat=repeat))


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[16, 64, 256])
    ap.add_argument("--density", type=float, default=0.05)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    opts = ap.parse_args()
    rng = random.Random(opts.seed)
    print(f"{'op':<9}{'n':>6}{'python ms':>12}{'cython ms':>12}{'speedup':>9}")
    for n in opts.sizes:
        a, b = random_rows(rng, n, opts.density), random_rows(rng, n, opts.density)
        cases = {"compose": (a, b, n), "converse": (a, n), "closure": (a, n)}
        for op, args in cases.items():
            py = bench(_pykernels, op, args, opts.repeat) * 1e3
            if _ckernels is None:
                print(f"{op:<9}{n:>6}{py:>12.3f}{'n/a':>12}{'':>9}")
                continue
            if getattr(_ckernels, op)(*args) != getattr(_pykernels, op)(*args):
                raise SystemExit(f"kernel mismatch: {op} n={n}")
            c = bench(_ckernels, op, args, opts.repeat) * 1e3
            print(f"{op:<9}{n:>6}{py:>12.3f}{c:>12.3f}{py / c:>8.1f}x")


if __name__ == "__main__":
    main()
