"""Compare the compiled kernels with the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat N]

Workloads: exhaustive factorization search on the two-generator example
stage and on a seeded four-generator build, and the capped least-cost search on a rank-1 table that has no
recursive structure.  Both backends must return identical results.
"""
import argparse
import statistics
import sys
import time

from graevmetric import kernels
from graevmetric.builder import BuildScript, ExplicitKatetov, RandomKatetov, run_build
from graevmetric.extension import KatetovFn
from graevmetric.table import table_from_rows
from graevmetric.words import Word

W = Word.parse


def e1_table():
    f = KatetovFn((W("e"), W("x1"), W("x1^-1")), (1, 1, 2))
    return run_build(BuildScript((ExplicitKatetov(f),)))[0][-1].metric


def loose_table():
    A = [W(s) for s in ("e", "x1", "x1^-1", "x1 x1", "x1^-1 x1^-1")]
    rows = [
        ["0", "1", "1", "3/2", "3/2"],
        ["1", "0", "2", "1", "5/2"],
        ["1", "2", "0", "5/2", "1"],
        ["3/2", "1", "5/2", "0", "3"],
        ["3/2", "5/2", "1", "3", "0"],
    ]
    return table_from_rows(1, A, rows)


def workloads():
    M = e1_table()
    _, T = M.scaled
    gens = [a.letters for a in M.gen_set]
    g = W("x2 x1 x1 x2^-1 x1^-1").letters
    yield "bruteforce_min |A|=5 len=6", lambda k: k.bruteforce_min(gens, T, g, (), 6)

    script = BuildScript(tuple(RandomKatetov(seed=7 + i, support_size=3, denominator_bound=4) for i in range(3)))
    B = run_build(script)[0][-1].metric
    _, TB = B.scaled
    gensB = [a.letters for a in B.gen_set]
    gB = W("x3 x1 x2 x3^-1 x4 x2^-1").letters
    yield "bruteforce_min |A|=9 len=7", lambda k: k.bruteforce_min(gensB, TB, gB, (), 7)

    L = loose_table()
    _, T2 = L.scaled
    gens2 = [a.letters for a in L.gen_set]
    g2 = W("x1 x1 x1 x1 x1 x1 x1").letters
    yield "capped_search |A|=5 cap=11", lambda k: k.capped_search(gens2, T2, g2, 11, 22, 10**6)


def timed(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return statistics.median(times), out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if "compiled" not in kernels.BACKENDS:
        print("compiled extension not available; build with `pip install -e . --no-build-isolation`")
        return 1
    py, cc = kernels.BACKENDS["python"], kernels.BACKENDS["compiled"]
    print(f"{'workload':32s} {'python s':>10s} {'compiled s':>11s} {'speedup':>8s}")
    for name, run in workloads():
        tp, rp = timed(lambda: run(py), args.repeat)
        tc, rc = timed(lambda: run(cc), args.repeat)
        if rp != rc:
            print(f"{name}: backends disagree: {rp} vs {rc}", file=sys.stderr)
            return 1
        print(f"{name:32s} {tp:10.4f} {tc:11.4f} {tp / tc:7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
