"""Walk through Q_2/(1+m^2): sums, rho, Tr, psi, a morphism and its lift."""
from fractions import Fraction

from vhtriples.functors import Psi, flat_finite_check, lift_morphism, tr_morphism, tr_object_closed_form, vh_iso_search
from vhtriples.valued import VH, EqualChar, MixedUnram, ball_enumerate, vh_embedding_morphism, vh_sum, vh_theta_rho

H = VH(MixedUnram(2), 2)
one, minus_one = H.elem(0, 1), H.elem(0, 3)
print(H.label)
print("  1 + 1   =", sorted(map(str, ball_enumerate(H, vh_sum(H, one, one), 4))))
print("  1 + (-1) =", sorted(map(str, ball_enumerate(H, vh_sum(H, one, minus_one), 3))))
print("  (log theta, rho exponent) =", vh_theta_rho(H))
print("  Tr(H) =", tr_object_closed_form(H))
psi = Psi(H)
print("  psi(2-adic class (3, 3)) =", psi(H.elem(3, 3)))

A, B = VH(EqualChar(2), 2), VH(EqualChar(2), 4, Fraction(1, 2))
f = vh_embedding_morphism(A, B, 2)
u = tr_morphism(f)
print(f"\n{A.label} -> {B.label}, t -> s^2")
print("  Tr(f) =", u.to_json())
L = lift_morphism(u, A, B)
print("  lift recovers f:", all(L.morphism(x) == f(x) for x in A.elements()))
print("  flat/finite:", flat_finite_check(f).to_json())

print("\nQ_2 vs F_2((t)) at level 1:", vh_iso_search(VH(MixedUnram(2), 1), VH(EqualChar(2), 1)).status)
print("Q_2 vs F_2((t)) at level 2:", vh_iso_search(VH(MixedUnram(2), 2), VH(EqualChar(2), 2)).to_json())
