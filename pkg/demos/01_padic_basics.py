# # p-adic numbers at finite precision
#
# A `PadicNumber` is p^v times a unit that is known modulo p^m.
# Precision only ever goes down, and a cancellation is kept as an
# explicit "known to vanish up to p^k" value instead of a false zero.

# +
from fractions import Fraction

from e0struct.errors import PrecisionError
from e0struct.padic import PadicNumber

x = PadicNumber.from_rational(Fraction(18), 1, 3, 5)
y = PadicNumber.from_rational(Fraction(1, 2), 1, 3, 5)
print("x =", x)
print("y =", y)
print("x * y =", x * y)
print("x / 9 =", x / 9)
# -

# Subtracting two numbers that agree in every known digit leaves an
# inexact zero.  Asking whether it vanishes to more digits than we know
# raises instead of guessing.

# +
a = PadicNumber.from_rational(1, 1, 5, 4)
b = PadicNumber.from_rational(1 + 5**6, 1, 5, 4)
d = a - b
print("a - b =", d)
print("zero to 4 digits?", d.is_zero(4))
try:
    d.is_zero(6)
except PrecisionError as exc:
    print("zero to 6 digits? ->", exc)
# -

# The unit part of -1 in Z_2 is all ones.

print(PadicNumber.from_rational(-1, 1, 2, 10).residue(10), "=", bin(1023))
