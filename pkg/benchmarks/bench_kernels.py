"""Compare the compiled and pure search kernels on exhaustive searches.

The workload is an unsatisfiable sentence whose normal form spans five
unary and one binary predicate, so size 3 forces a full sweep of 2**24
candidates.  Run from the repository root:

    python benchmarks/bench_kernels.py
"""

import time

from fo2small import Vocabulary, parse_formula, to_scott_normal_form
from fo2small import _purecore
from fo2small.satengine import _snf_tables, candidate_count

try:
    from fo2small import _fastcore
except ImportError:
    _fastcore = None

UNSAT_TEXT = "(A x. E y. (R0(x,y) & !(E y. R0(y,x)))) & (A x. A y. !R0(x,y))"


def timed(fn, *args):
    t0 = time.perf_counter()
    result = fn(*args)
    return result, time.perf_counter() - t0


def main():
    vocab = Vocabulary(("P0", "P1"), ("R0",))
    snf = to_scott_normal_form(parse_formula(UNSAT_TEXT, vocab), vocab)
    tables = _snf_tables(snf)
    n, m = snf.vocabulary.n, snf.vocabulary.m

    print(f"normal form over {n} unary + {m} binary predicates, {len(snf.betas)} witnesses")
    print(f"{'size':>4} {'candidates':>12} {'python':>10} {'compiled':>10} {'speedup':>8}")
    for size in (2, 3):
        stop = candidate_count(snf.vocabulary, size)
        pure_hit, pure_t = timed(_purecore.search_tables, size, n, m, *tables, 0, stop)
        if _fastcore is None:
            print(f"{size:>4} {stop:>12} {pure_t:>9.3f}s {'n/a':>10}")
            continue
        fast_hit, fast_t = timed(_fastcore.search_tables, size, n, m, *tables, 0, stop)
        if fast_hit != pure_hit:
            raise AssertionError(f"kernels disagree at size {size}: {fast_hit} vs {pure_hit}")
        print(f"{size:>4} {stop:>12} {pure_t:>9.3f}s {fast_t:>9.3f}s {pure_t / fast_t:>7.1f}x")


if __name__ == "__main__":
    main()
