"""
The rational generating function of a family
=============================================

``sum_n f_n t^n`` is rational with a product denominator, and the numerator
has t-degree at most the bound. Two independent constructions of the
numerator agree.
"""

from idealclose import bound, family_gf, parse_problem, series_match
from idealclose.genfunc import assemble_numerator, falling_factorial_gf, to_falling_factorial

fam = parse_problem("""
ring Q[x, y, z, w]
param n
family f(n) = x*y^(2n+1) + z*w^(2n+1)
""").family

gf = family_gf(fam)
print("numerator:  ", gf.numerator_text())
print("denominator:", gf.denominator_text())
print("matches the series through t^6:", series_match(gf, fam, (6,)))

# Polynomial coefficients go through the falling-factorial basis:
# n^3 = [n]_3 + 3 [n]_2 + [n]_1, and sum [n]_k t^n = k! t^k / (1 - t)^(k+1).
P = fam.param_ring
n, = P.gens
print("n^3 in falling factorials:", to_falling_factorial(n**3).coefficients)
series = falling_factorial_gf(2, 6)
print("coefficients of 2 t^2 / (1 - t)^3:", [series[k] for k in range(7)])

poly = parse_problem("""
ring Q[x1, x2, x3, y1, y2, y3]
param n
family f(n) = (n+1)*x1*y1^(2n+1) + x2*y2^(n+3) + (n^2+1)*x3*y3^(n+2)
""").family
gf = family_gf(poly)
print("bound", bound(poly), "numerator t-degree", gf.numerator_degrees())
print("series and falling-factorial numerators agree:", assemble_numerator(poly) == gf.numerator)
