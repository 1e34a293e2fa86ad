"""The q-pushout of a point into a 2-point space, and its universal property."""
from fractions import Fraction

from purebench.qmet import QMET, check_q_pushout_universal, map_from_list, q_pushout, space, two_point, unit_space

one = unit_space()
two = two_point(1)
i0 = map_from_list(one, two, [0])

for q in (Fraction(0), Fraction(1, 2), Fraction(1)):
    po = q_pushout(i0, QMET.identity(one), q)
    pts = list(po.D.points)
    print(f"q = {q}: {len(pts)} points")
    for i, x in enumerate(pts):
        for y in pts[i + 1:]:
            print(f"   d({x}, {y}) = {po.D.d(x, y)}")

# a competitor: e0 <- 0, e2 <- 1 on the top, the point lands on e1
E = space(["e0", "e1", "e2"], [["1/2", "1"], ["1"]])
top = map_from_list(two, E, ["e0", "e2"])
bottom = map_from_list(one, E, ["e1"])
po = q_pushout(i0, QMET.identity(one), Fraction(1, 2))
rep = check_q_pushout_universal(po, top, bottom)
print("competitor factors uniquely:", bool(rep))
print("mediator:", {p: rep.mediator(p) for p in po.D.points})
