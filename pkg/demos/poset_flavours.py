"""Chain-based purity in finite posets: three flavours, one answer.

In a finite poset every chain stabilises, so joins of chains are just their
last elements and the three flavours of the lifting condition collapse.
"""
import random

from purebench import generators as gen
from purebench.base import Map
from purebench.omega_cpo import CPO, FLAVORS, chain_poset, pure_wrt_cpo
from purebench.purity import is_E_pure

# nonempty chains always retract onto their subchains, so the empty chain
# is where lifting first fails
f = Map(chain_poset(0), chain_poset(1), {})
for flavour in FLAVORS:
    v = pure_wrt_cpo(f, f, flavour)
    print(f"empty chain into a point, {flavour}: {bool(v)}  {v.counterexample}")

rng = random.Random(2024)
tally = {True: 0, False: 0}
for _ in range(100):
    K = gen.random_poset(rng, max_points=3, prefix="k")
    L = gen.random_poset(rng, max_points=4, prefix="l")
    A = gen.random_poset(rng, max_points=2, prefix="a")
    B = gen.random_poset(rng, max_points=3, prefix="b")
    f = gen.random_monotone_map(rng, K, L)
    g = gen.random_monotone_map(rng, A, B)
    verdicts = {bool(pure_wrt_cpo(f, g, fl)) for fl in FLAVORS}
    verdicts.add(bool(is_E_pure(CPO, "dense-embedding", f, g)))
    assert len(verdicts) == 1
    tally[verdicts.pop()] += 1
print("100 random instances, flavours agree; pure/non-pure:", tally[True], tally[False])
