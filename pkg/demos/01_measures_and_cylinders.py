"""Measures and cylinders on the uneven three-symbol zip shift.

Builds the zip shift, prints the induced measure on the negative alphabet and the
fiber distributions, then shows that pulling a cylinder back through the
shift keeps its measure while moving constraints across the zero index.
"""
from zipshift import GeneralizedCylinder, IndexConstraint, cylinder_measure, shift_pullback
from zipshift.spec import uneven_three_symbol_spec

spec = uneven_three_symbol_spec()
m = spec.measures
print("p+ :", {s.name: str(spec.weight(s)) for s in spec.s_plus})
print("p- :", {t.name: str(m.p_minus[t]) for t in spec.s_minus})
for t in spec.s_minus:
    print(f"fiber of {t.name}:", {s.name: str(w) for s, w in m.q[t].items()})

a = spec.symbol("a", spec.s_minus[0].side)
zero = spec.s_plus[0]
c = GeneralizedCylinder([IndexConstraint(-1, {a}), IndexConstraint(0, {zero})])
print("\ncylinder", c, "has measure", cylinder_measure(spec, c))
for k in range(1, 4):
    pulled = shift_pullback(spec, c, k)
    print(f"sigma^-{k}:", pulled, "measure", cylinder_measure(spec, pulled))
