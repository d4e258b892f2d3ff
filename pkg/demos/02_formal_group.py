# # The formal group of a Weierstrass curve
#
# Near the point at infinity a curve is described by one parameter
# z = -x/y.  Adding points becomes a power series F(X, Y) whose
# coefficients are integer polynomials in a1, a2, a3, a4, a6.

# +
from e0struct.formal import TruncatedSeries, compute_group_law, compute_w, mul_by_n

print("w(T) =", compute_w(7))
print()
law = compute_group_law(5)
print("F(X, Y) =", law.F)
print()
print("inverse =", law.inv)
# -

# Multiplication by n is F applied n - 1 times.  For n = p the
# coefficients of T^k with p not dividing k are all divisible by p,
# and the coefficient of T^k has weight k - 1.

# +
for p in (2, 3):
    print(f"[{p}](T) =", mul_by_n(p, 5))

seven = mul_by_n(7, 9)
for k in (5, 7):
    b = seven[(k,)]
    print(f"T^{k} coefficient of [7] has weight {b.weight_filter().weight}, {len(b.terms)} monomials")
# -

# The group axioms hold identically up to the truncation degree.

# +
d = 8
F = compute_group_law(d).F
x, y, z = (TruncatedSeries.variable(i, 3, d) for i in range(3))
left = F.substitute(F.embed(3, (0, 1)), z)
right = F.substitute(x, F.embed(3, (1, 2)))
print("associative through degree", d, ":", left == right)
# -

# Plugging in a specific curve is a separate, cheap pass.  Here the
# multiplication-by-7 series of y^2 + 7xy - 28y = x^3 + 7x - 35 is
# reduced modulo 7^4.

# +
from e0struct.formal import CoefficientRing

ring = CoefficientRing.specialized((7, 0, -28, 7, -35), 7, 4)
print(mul_by_n(7, 9, ring))
