"""The baker map as a geometric zip shift.

Maps a point and recovers its preimages, reads off its symbolic itinerary,
then estimates both entropies by sampling the unit square.
"""
import math

from zipshift import BakerSystem, Point, baker_apply, baker_preimages, encode
from zipshift.baker import empirical_block_entropy, empirical_folding_entropy
from zipshift.spec import two_to_one_baker_spec

b = BakerSystem(two_to_one_baker_spec())
p = Point(0.1, 0.3)
q = baker_apply(b, p)
print("F(p) =", q)
print("preimages of F(p):", baker_preimages(b, q))
print("itinerary of p over [-2, 3):", [s.name for s in encode(b, p, 2, 3)])
print("itinerary of F(p) over [-3, 2):", [s.name for s in encode(b, q, 3, 2)])

block = empirical_block_entropy(b, 1_000_000, 4, seed=42)
fold = empirical_folding_entropy(b, 100_000, seed=42)
print(f"block entropy {block.value:.5f} +/- {block.stderr:.1e} (exact {math.log(4):.5f})")
print(f"folding entropy {fold.value:.5f} (exact {math.log(2):.5f})")
