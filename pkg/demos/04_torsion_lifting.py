# # Recovering a torsion point one digit at a time
#
# When E0(Q_p) has p-torsion, the series [p](z) has p - 1 roots among
# the p-adic units.  We find them digit by digit, then map a root back
# to the curve with z -> (z / w(z), -1 / w(z)).

# +
from e0struct.classify import torsion_root, torsion_witness
from e0struct.curve import compute_invariants, mul_point, psi, reduce_point

E7 = compute_invariants((7, 0, -28, 7, -35), 7)
for r in range(1, 7):
    z = torsion_root(E7, 6, r)
    print(f"root lifting {r} mod 7:", z)
# -

# The root that lifts 5 = -2 mod 7 belongs to the rational point (2, 1).

# +
W = torsion_witness(E7, 10, residue_hint=5)
print("witness:", W)
print("7 * witness =", mul_point(E7, 7, W, digits=8))
print("reduction:", reduce_point(E7, W))
# -

# A random curve does the same thing whenever its congruence holds.
# Here a6 = 14 mod 49 forces 7-torsion.

# +
E = compute_invariants((14, 7, 21, 0, 63), 7)
W = torsion_witness(E, 8)
print(W, "| psi valuation", psi(E, W).valuation)
print("7 * W =", mul_point(E, 7, W, digits=6))
