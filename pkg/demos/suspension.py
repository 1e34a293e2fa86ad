"""Injectivity in complexes is not closed under suspension.

B is Z/3 in degree 1 and h: P_0 -> C_2 picks the generator of the cone.
Chain maps P_0 -> B pick an element of B_0 = 0, so only the zero map has to
extend.  After shifting B down by one, B_0 = Z/3 and a nonzero map would
have to extend through the Z/2 of the cone, which no homomorphism allows.
"""
from purebench.dgab import DG, is_E_injective_dg, is_ordinarily_injective_dg, shift
from purebench.props import suspension_instance

B, h = suspension_instance()
print("B:", B.to_json())
print("ordinarily h-injective:          ", is_ordinarily_injective_dg(B, h))
print("shift(B, -1) ordinarily injective:", is_ordinarily_injective_dg(shift(B, -1), h))
print("E-injective (graded version):     ", is_E_injective_dg(B, h))

pre = DG.precompose(h, B)
H = pre.cod
missed = [(n, x) for n in H.degrees() for x in H.group_elements(n) if (n, x) not in pre.image()]
print("graded maps out of P_0 that do not extend:", missed[:4])
