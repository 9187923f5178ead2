"""Compare the compiled and pure-Python GF(p) kernels.

    python3 benchmarks/bench_kernels.py --sizes 16 48 96 --prime 3
"""

from __future__ import annotations

import argparse
import sys
import timeit

import numpy as np

from descentkit import kernels


def bench(fn, number: int) -> float:
    """Best-of-3 seconds per call."""
    return min(timeit.repeat(fn, number=number, repeat=3)) / number


def rows_for(args, impls):
    rng = np.random.default_rng(args.seed)
    out = []
    for n in args.sizes:
        a = rng.integers(0, args.prime, size=(n, n + n // 2), dtype=np.int64)
        ref = None
        times = {}
        for name, mod in impls.items():
            res = mod.rref_modp(a, args.prime)
            got = (np.asarray(res[0]).tolist(), list(res[1]))
            if ref is None:
                ref = got
            elif got != ref:
                raise SystemExit(f"backends disagree on rref of size {n}")
            times[name] = bench(lambda mod=mod: mod.rref_modp(a, args.prime), args.number)
        out.append(("rref", f"{n}x{n + n // 2}", times))
    # exhaustive rank search: h basis matrices of size s, no combination of full rank
    for h in args.search_heights:
        s = 4
        basis = np.zeros((h, s, s), dtype=np.int64)
        for i in range(h):
            basis[i, 0, i % s] = 1  # everything lives in the first row, so rank <= 1
        total = args.prime ** h
        times = {}
        for name, mod in impls.items():
            assert mod.first_rank_combination(basis, args.prime, s, 0, total) == -1
            times[name] = bench(lambda mod=mod: mod.first_rank_combination(basis, args.prime, s, 0, total), 1)
        out.append(("rank-search", f"{args.prime}^{h} combos", times))
    return out


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--sizes", type=int, nargs="+", default=[16, 48, 96])
    ap.add_argument("--search-heights", type=int, nargs="+", default=[8, 10])
    ap.add_argument("--prime", type=int, default=3)
    ap.add_argument("--number", type=int, default=5, help="calls per timing sample")
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args(argv)

    impls = {"python": kernels.backend("python")}
    try:
        impls["cython"] = kernels.backend("cython")
    except ImportError:
        print("compiled kernels are not built; timing the Python path only", file=sys.stderr)

    header = f"{'kernel':<12} {'input':<16}" + "".join(f"{k:>12}" for k in impls) + ("     speedup" if len(impls) > 1 else "")
    print(header)
    for kernel, label, times in rows_for(args, impls):
        line = f"{kernel:<12} {label:<16}" + "".join(f"{times[k] * 1e3:>10.3f}ms" for k in impls)
        if len(impls) > 1:
            line += f"{times['python'] / times['cython']:>11.1f}x"
        print(line)
    return 0


if __name__ == "__main__":
    sys.exit(main())
