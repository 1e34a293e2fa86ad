"""Purity seen through a positive-primitive formula.

psi_g(x) says "x factors through g".  A map is elementary for psi_g exactly
when it is pure with respect to g; here both sides are computed separately.
"""
import random

from purebench import generators as gen
from purebench.pp_logic import interpret, is_elementary, psi_g
from purebench.purity import is_E_pure
from purebench.qmet import QMET, map_from_list, space

L = space([0, 1, 2], [[1, 2], [1]])
K = space([0, 2], [[2]])
f = map_from_list(K, L, [0, 2])
phi = psi_g(f, QMET)
print("psi_g at L has", len(interpret(QMET, L, phi).m.image()), "elements")
v = is_elementary(QMET, f, phi)
print("elementary:", bool(v), v.counterexample)

rng = random.Random(5)
agree = 0
for _ in range(60):
    f = gen.random_qmet_pair(rng, 3)
    g = gen.random_test_map(rng)
    agree += bool(is_elementary(QMET, f, psi_g(g, QMET))) == bool(is_E_pure(QMET, "surjective-isometry", f, g))
print(f"elementary == pure on {agree} of 60 random pairs")
