"""Folding entropy measures how much the shift forgets per step.

Each band's fiber entropy is weighted by the band's measure.  The total
agrees with H(C_0) - H(C_-1), and adding H(C_-1) back recovers the metric
entropy.  A bijective phi forgets nothing.
"""
from zipshift import fiber_entropy, folding_entropy
from zipshift.spec import bernoulli_spec, two_to_one_baker_spec, uneven_three_symbol_spec

for spec in (two_to_one_baker_spec(), uneven_three_symbol_spec(), bernoulli_spec(["1/3", "2/3"])):
    f = folding_entropy(spec)
    fibers = ", ".join(f"{t.name}: {fiber_entropy(spec, t):.4f}" for t in spec.s_minus)
    print(f"{spec.label:>16}: F = {f.fiber_sum:.6f} (difference form {f.difference:.6f}); fibers {fibers}")
