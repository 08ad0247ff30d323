"""
Finite generation of a linear-exponent family
=============================================

For ``f_n = sum_k c_k(n) x^(A_k n + b_k)`` with integer polynomial
coefficients, the members with ``n <= l`` generate every member, where
``l_j = sum_k (deg_{n_j} c_k + 1) - 1``. We check this by brute force.
"""

from idealclose import bound, buchberger, finite_generators, instantiate, is_member, parse_problem

spec = parse_problem("""
ring Q[x, y, z]
param n, m
family f(n, m) = (n^2 - m)*x^(n+m+2) + (n*m^4 + m^2)*x^(2n+m+1)*z^(m+n+3) + (n^5 + n^2)*y^(4n+m+2)
""")
fam = spec.family
print("bound l =", bound(fam))
print("f(1, 1) =", instantiate(fam, (1, 1)))

# A one-parameter family with a constant base factor 2^(n+2).
base = parse_problem("""
ring Q[x, y, z]
param n
family f(n) = x^(2n+1) + y^(2n+1) + z^(n+2) + (base 2)^(n+2)*x^2
""").family
ell = bound(base)
gens = finite_generators(base)
print(f"base-point family: l = {ell[0]}, generators:")
for g in gens:
    print("   ", g)

gb = buchberger(gens)
beyond = [n for n in range(ell[0] + 1, ell[0] + 8) if is_member(instantiate(base, (n,)), gb)]
print("members beyond the bound that reduce to zero:", beyond)
