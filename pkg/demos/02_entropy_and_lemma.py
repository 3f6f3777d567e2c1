"""Metric entropy from finite partitions.

The approximants h_{n,k} come from enumerating the k-fold dynamical
refinement of the cylinders over -n..n-1.  They decrease towards H(C_0) with
an error that shrinks like 1/k.  The refinement itself is checked against the
plain cylinder partition it should equal.
"""
from zipshift import ks_entropy, verify_correfinement_lemma
from zipshift.spec import two_to_one_baker_spec, uneven_three_symbol_spec

for spec in (two_to_one_baker_spec(), uneven_three_symbol_spec()):
    result = ks_entropy(spec, pairs=[(1, k) for k in range(2, 8)] + [(2, 4), (2, 6)])
    print(f"{spec.label}: entropy {result.value:.6f} nats")
    for row in result.table:
        print(f"  n={row.n} k={row.k}  h={row.h:.6f}  bound={row.error_bound:.6f}")
    for n, k in [(1, 2), (1, 3), (2, 4)]:
        v = verify_correfinement_lemma(spec, n, k)
        print(f"  refinement n={n} k={k}: {v.status} ({v.detail})")
