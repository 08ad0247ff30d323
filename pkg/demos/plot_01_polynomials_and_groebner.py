"""
Exact polynomials and reduced Gröbner bases
===========================================

Polynomials live in a :class:`RingContext` and carry exact rational
coefficients. A reduced Gröbner basis is canonical, so two generating sets
describe the same ideal exactly when their bases agree.
"""

from idealclose import RingContext, buchberger, divide, ideals_equal, is_member

R = RingContext("xy")
x, y = R.gens

# Arithmetic is exact; big integers are no problem.
f = [x ** (2 * n + 1) + (n**100 + 1) * y ** (n + 1) for n in range(3)]
print("f2 =", f[2])

# The bound for this family asks for 102 generators, but three already
# generate a very small ideal.
gb = buchberger(f)
print("reduced basis:", [str(g) for g in gb])
print("<f0, f1, f2> == <x + y, y^2>:", ideals_equal(f, [x + y, y**2]))

# Division returns quotients and a remainder with f = sum q_i g_i + r.
res = divide(y**3, [x + y, y**2], "lex")
print("y^3 mod [x + y, y^2]: remainder", res.remainder, "quotients", [str(q) for q in res.quotients])

# Membership is a zero remainder modulo the basis.
print("x^5 + y^5 in ideal:", is_member(x**5 + y**5, gb))
print("x in ideal:", is_member(x, gb))
