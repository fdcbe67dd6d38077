"""Compare the compiled polynomial kernel with the pure-Python fallback.

Usage: python3 benchmarks/bench_kernel.py [--repeat N]
"""
import argparse
import timeit

from markov_cluster import _kernel_py
from markov_cluster import laurent
from markov_cluster.cluster import cluster_variable, clear_memo
from markov_cluster.farey import Frac
from markov_cluster.poset import KParams

try:
    from markov_cluster import _kernel
except ImportError:
    _kernel = None


def sample_terms():
    k = KParams(1, 2, 2)
    a = cluster_variable(1, Frac(3, 5), k)
    b = cluster_variable(1, Frac(2, 3), k)
    return a.terms, b.terms


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args()
    a, b = sample_terms()
    print("operands: %d x %d terms, active kernel: %s" % (len(a), len(b), laurent.KERNEL))
    impls = [("python", _kernel_py)]
    if _kernel is not None:
        impls.append(("cython", _kernel))
    ref = None
    for name, mod in impls:
        out = mod.mul_terms(a, b, laurent._OFFSET)
        if ref is None:
            ref = out
        assert out == ref, "kernels disagree"
        t = min(timeit.repeat(lambda: mod.mul_terms(a, b, laurent._OFFSET), number=args.repeat, repeat=3))
        print("%-7s mul_terms: %.3f ms per call" % (name, 1000 * t / args.repeat))

    # end to end: a deep cluster variable from scratch
    def deep():
        clear_memo()
        cluster_variable(1, Frac(5, 8), KParams(2, 2, 2))
    t = min(timeit.repeat(deep, number=1, repeat=3))
    print("x_{1,5/8} at k=(2,2,2) with %s kernel: %.3f s" % (laurent.KERNEL, t))


if __name__ == "__main__":
    main()
