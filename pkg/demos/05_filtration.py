# # Climbing the filtration
#
# E1 is the kernel of reduction and E_n collects points with
# v(x) <= -2n.  Multiplication by p moves a point of E_n into
# E_(n+1) and no further, so E1 has no torsion.

# +
import random

from e0struct.curve import filtration_level, mul_point, psi, random_normalized_curve, random_point

rng = random.Random(5)
for p in (2, 3, 5, 7):
    E = random_normalized_curve(p, rng)
    P = random_point(E, rng, level=1, precision=30)
    levels = [filtration_level(E, P)]
    for _ in range(3):
        P = mul_point(E, p, P)
        levels.append(filtration_level(E, P))
    print(f"p = {p}: levels {levels}, v(psi) of the last point = {psi(E, P).valuation}")
