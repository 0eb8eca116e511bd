"""Time the compiled kernels against the pure-Python fallback.

Run with ``python3 benchmarks/bench_kernels.py``; prints one line per kernel
with the best-of-N time for each available backend and the speedup.
"""
import argparse
import timeit

import numpy as np

from bsk import kernels
from bsk.groups import sym


def random_tree_csr(n, rng):
    parent = [int(rng.integers(0, i)) for i in range(1, n)]
    adj = [[] for _ in range(n)]
    for child, p in enumerate(parent, start=1):
        adj[child].append(p)
        adj[p].append(child)
    indptr = np.zeros(n + 1, dtype=np.int64)
    indptr[1:] = np.cumsum([len(a) for a in adj])
    indices = np.array([w for a in adj for w in a], dtype=np.int64)
    return indptr, indices


def cases(rng):
    indptr, indices = random_tree_csr(20000, rng)
    src = np.array([0], dtype=np.int64)
    s4 = sym(4)
    table = s4.table
    n = 5000
    perms = np.array([rng.permutation(n) for _ in range(4)], dtype=np.int64)
    return {
        "bfs (20k-vertex tree)": lambda k: k.bfs(indptr, indices, src),
        "associativity (S4 table)": lambda k: k.first_nonassociative(table),
        "closure (S4, 2 generators)": lambda k: k.closure(table, np.array([1, 6]), s4.identity),
        "orbit labels (4 perms of 5000)": lambda k: k.orbit_labels(perms, n),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    backends = kernels.backends()
    print(f"backends: {', '.join(backends)} (active: {kernels.BACKEND})")
    for name, fn in cases(rng).items():
        times = {b: min(timeit.repeat(lambda: fn(mod), number=1, repeat=args.repeat))
                 for b, mod in backends.items()}
        cols = "  ".join(f"{b} {t * 1e3:8.2f} ms" for b, t in times.items())
        speed = ""
        if "cython" in times and "python" in times:
            speed = f"  x{times['python'] / times['cython']:.0f}"
        print(f"{name:32s} {cols}{speed}")


if __name__ == "__main__":
    main()
