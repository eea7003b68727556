"""Time the compiled kernel against the pure-Python one.

    python3 benchmarks/bench_kernel.py [--reps N] [--seed S]

Also times the product constructions end to end under each backend.
"""

import argparse
import random
import time

from ordcorners import kernel
from ordcorners import products as P
from ordcorners.generators import random_space


def _matrices(rng, count, n):
    return [[[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)] for _ in range(count)]


def _time(fn, reps):
    best = float("inf")
    for _ in range(reps):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def _products(seed):
    for s in range(40):
        rng = random.Random(seed + s)
        X = random_space(rng, max_hyps=4)
        Y = random_space(rng, max_hyps=4, prefix="G", interior="Y")
        P.ordered_product_fan(X, Y)
        P.ordered_product_blowup(X, Y, rng=rng)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--reps", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    cases = {n: _matrices(rng, 400, n) for n in (4, 8, 12)}
    backends = ["python"] + (["compiled"] if kernel.COMPILED_AVAILABLE else [])
    print(f"{'task':<22}" + "".join(f"{b:>12}" for b in backends))
    rows = []
    for n, ms in cases.items():
        rows.append((f"det {n}x{n} x400", lambda ms=ms: [kernel.det(m) for m in ms]))
        rows.append((f"rref {n}x{n} x400", lambda ms=ms, n=n: [kernel.rref(m, n) for m in ms]))
    rows.append(("products x40", lambda: _products(args.seed)))
    prev = kernel.backend()
    try:
        for name, fn in rows:
            line = f"{name:<22}"
            for b in backends:
                kernel.use_backend(b)
                line += f"{_time(fn, args.reps):>11.4f}s"
            print(line)
    finally:
        kernel.use_backend(prev)
    if not kernel.COMPILED_AVAILABLE:
        print("compiled kernel not built; python only")


if __name__ == "__main__":
    main()
