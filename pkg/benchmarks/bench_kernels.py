"""Compare the compiled kernels with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import time

import numpy as np

from lsboundary import _kernels_py, kernels
from lsboundary.zoo import ZooRule, enumerate_walks, make_zoo_surface, parse_rule
from lsboundary.holonomy import CompiledFamily


def best_of(f, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        f()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases():
    rng = np.random.default_rng(0)
    n_walks, per = 20000, 4
    D = rng.uniform(-50, 50, n_walks * per)
    lsh = rng.uniform(-5, 5, n_walks * per)
    lch = 0.5 * np.logaddexp(0.0, 2.0 * lsh)
    offsets = np.arange(0, n_walks * per + 1, per, dtype=np.int64)
    codes = np.tile(np.array([0, 1], dtype=np.int8), n_walks * per)
    vals = rng.uniform(-3, 3, codes.size)
    woff = np.arange(0, codes.size + 1, 2 * per, dtype=np.int64)
    m = 100000
    tw = (rng.uniform(0.01, 10, m), rng.uniform(0, 20, m), -rng.uniform(1e-3, 1e3, m), rng.uniform(1e-3, 1e3, m))
    return {
        "crossing_log_traces (20k walks)": lambda impl: kernels.crossing_log_traces(D, lsh, lch, offsets, impl=impl),
        "walk_products (20k walks)": lambda impl: kernels.walk_products(codes, vals, woff, impl=impl),
        "twisted_traces (100k)": lambda impl: kernels.twisted_traces(*tw, impl=impl),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    impls = {"python": _kernels_py}
    try:
        from lsboundary import _kernels
        impls["cython"] = _kernels
    except ImportError:
        print("compiled kernels not built; only the fallback is timed")
    print(f"{'kernel':34s}" + "".join(f"{k:>12s}" for k in impls) + ("     speedup" if len(impls) == 2 else ""))
    for name, f in cases().items():
        ts = {k: best_of(lambda: f(m), args.repeat) for k, m in impls.items()}
        line = f"{name:34s}" + "".join(f"{t * 1e3:10.1f}ms" for t in ts.values())
        if len(ts) == 2:
            line += f"{ts['python'] / ts['cython']:11.1f}x"
        print(line)

    s = make_zoo_surface(ZooRule("flute", parse_rule("const:2"), N=20))
    words, steps = enumerate_walks(s, 4)
    cf = CompiledFamily(s.graph, words, steps)
    t = best_of(lambda: cf.lengths(s), 1)
    print(f"end to end: {len(words)} curve lengths on a 20-pants flute in {t:.2f}s ({kernels.BACKEND} backend)")


if __name__ == "__main__":
    main()
