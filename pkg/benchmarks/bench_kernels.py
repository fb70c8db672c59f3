"""Time the compiled kernels against the pure-Python fallback.

Usage::

    python benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import timeit

from muldep._kernels import _fallback, native

CASES = {
    "factor_small": ("for n in range(10**6, 10**6 + 2000): k.factor_small(n)", 1),
    "coprime_pairs": ("k.coprime_pairs(400)", 1),
    "count_coprime_pairs": ("k.count_coprime_pairs(200000)", 1),
    "smooth_upto": ("k.smooth_upto(10**12, (2, 3, 5, 7, 11, 13))", 1),
}


def bench(module, stmt, number, repeat):
    return min(timeit.repeat(stmt, globals={"k": module}, number=number, repeat=repeat))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if native is None:
        print("compiled backend not built; only the fallback is available")
    print(f"{'kernel':<22}{'python (s)':>12}{'native (s)':>12}{'speedup':>10}")
    for name, (stmt, number) in CASES.items():
        py = bench(_fallback, stmt, number, args.repeat)
        if native is None:
            print(f"{name:<22}{py:>12.4f}{'-':>12}{'-':>10}")
            continue
        nat = bench(native, stmt, number, args.repeat)
        print(f"{name:<22}{py:>12.4f}{nat:>12.4f}{py / nat:>9.1f}x")


if __name__ == "__main__":
    main()
