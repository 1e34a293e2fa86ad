"""Purity, bare purity and weak purity for the end points of a 3-point line.

K = {0, 2} sits inside L = 0 - 1 - 2 with the path metric.  The inclusion
is not pure: nothing retracts L onto its end points without stretching the
middle.  Weak purity lets the lifting be off by 2q, and we watch where that
starts to help.
"""
from fractions import Fraction

from purebench.oracles import brute_pure_qmet
from purebench.purity import is_barely_E_pure, is_E_pure, weakly_pure_at
from purebench.qmet import QMET, map_from_list, nonexpanding_maps, space

L = space([0, 1, 2], [[1, 2], [1]], name="line")
K = space([0, 2], [[2]], name="ends")
f = map_from_list(K, L, [0, 2])

print("nonexpanding maps line -> ends:", nonexpanding_maps(L, K))

v = is_E_pure(QMET, "surjective-isometry", f, f)
print("pure:", bool(v), "counterexample:", v.counterexample)
print("exhaustive lifting search agrees:", brute_pure_qmet(f, f)[0] == bool(v))
print("barely pure:", bool(is_barely_E_pure(QMET, "surjective-isometry", f, f)))

for q in (Fraction(1, 2), Fraction(3, 4), Fraction(1)):
    w = weakly_pure_at(f, f, q)
    print(f"weakly pure at q = {q}: {bool(w)}")

# Only constant maps exist back onto the ends, so any lift sends the two
# end points together and misses the identity of K by 2.  The bound 2q
# reaches 2 at q = 1, and not before.
print("under (all, iso) every map is pure:", bool(is_E_pure(QMET, "all-iso", f, f)))
