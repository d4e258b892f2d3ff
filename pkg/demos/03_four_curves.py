# # Four curves with a p-torsion point of good reduction
#
# For a curve with additive reduction, the points that reduce to a
# smooth point form a group E0(Q_p).  It is usually Z_p.  For
# p = 2, 3, 5, 7 one congruence on the coefficients of a normalized
# model decides whether a copy of Z/p appears instead.

# +
from fractions import Fraction

from e0struct.classify import classify, format_report, verify_paper_examples
from e0struct.curve import CurvePoint, compute_invariants, mul_point, reduction_type

print(format_report(verify_paper_examples()))
# -

# Walk through one of them by hand: y^2 - 5y = x^3 + 20x^2 - 15x at p = 5.

# +
E = compute_invariants((0, 20, -5, -15, 0), 5)
print(E, "has", reduction_type(E).kind.value, "reduction, delta =", E.delta)
P = CurvePoint(Fraction(1), Fraction(-1))
for n in range(1, 6):
    print(f"{n}P =", mul_point(E, n, P))
# -

# The classifier reports the congruence it tested and whether the
# independent valuation check on [p] agreed.

# +
result = classify(E)
print(result.structure.pretty(5), "by", result.criterion, "| oracle agrees:", result.oracle_agreement)
# -

# Changing a4 by 5 breaks the congruence and the torsion disappears.

E_free = compute_invariants((0, 20, -5, -10, 0), 5)
print(classify(E_free).structure.pretty(5), "by", classify(E_free).criterion)
