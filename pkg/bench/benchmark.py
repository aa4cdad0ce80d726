"""Compare the compiled and pure-Python kernels on the workloads the package runs.

    python bench/benchmark.py [--repeat 3] [--quick]

Prints one row per workload with the best wall time of each backend and the
speed-up. Results of the two backends are checked for equality first.
"""
from __future__ import annotations

import argparse
import time

from ekr_kit import _pykernels
from ekr_kit.families import brute_alpha  # noqa: F401  (warms the package import)
from ekr_kit.pseudoadjacency import wilson_descriptor
from ekr_kit.scheme import SchemeParams, subset_mask, subsets

try:
    from ekr_kit import _ckernels
except ImportError:  # pragma: no cover
    _ckernels = None


def _best(fn, repeat):
    best = float("inf")
    result = None
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - start)
    return best, result


def _compatibility_graph(n, k, t):
    masks = [subset_mask(F) for F in subsets(n, k)]
    return [
        sum(1 << v for v, b in enumerate(masks) if u != v and (a & b).bit_count() >= t)
        for u, a in enumerate(masks)
    ]


def workloads(quick):
    triples = [(9, 4, 2), (10, 4, 2)] if quick else [(9, 4, 2), (10, 4, 2), (10, 4, 3), (10, 5, 2)]
    for triple in triples:
        M = wilson_descriptor(SchemeParams(*triple)).materialize()
        lam1 = M.row_sums()[0]
        top, _ = M.shifted(lam1, sign=-1).scaled_integer_rows()
        shifted, _ = M.shifted(1).scaled_integer_rows()
        yield f"psd(r*I - W) {triple} N={M.N}", "sym_bareiss", (top,)
        yield f"rank(W + I) {triple} N={M.N}", "bareiss_rank", (shifted,)
    for triple in [(7, 3, 2), (8, 4, 3)] if quick else [(7, 3, 2), (8, 4, 3), (8, 3, 2)]:
        adj = _compatibility_graph(*triple)
        yield f"max_clique G{triple} N={len(adj)}", "max_clique", (adj,)
    masks = [subset_mask(F) for F in subsets(12, 5)]
    yield f"intersection_sizes J(12,5) N={len(masks)}", "intersection_sizes", (masks,)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true")
    args = ap.parse_args(argv)
    if _ckernels is None:
        print("compiled kernels are not built; nothing to compare")
        return 1
    print(f"{'workload':44s} {'python s':>10s} {'cython s':>10s} {'speed-up':>9s}")
    for label, name, inputs in workloads(args.quick):
        def call(mod):
            fresh = tuple([row[:] for row in x] if x and isinstance(x[0], list) else x for x in inputs)
            return getattr(mod, name)(*fresh)

        t_py, r_py = _best(lambda: call(_pykernels), args.repeat)
        t_c, r_c = _best(lambda: call(_ckernels), args.repeat)
        if r_py != r_c:
            raise SystemExit(f"backends disagree on {label}")
        print(f"{label:44s} {t_py:10.4f} {t_c:10.4f} {t_py / t_c:8.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
