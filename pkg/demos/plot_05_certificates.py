"""
Certificates for families with polynomial exponents
===================================================

For ``f_n = g_(phi(n))`` with ``phi`` nonlinear, no bound applies directly.
Instead we scan which ``g_m`` lie in ``J = <f_n : n <= k0>``, certify whole
arithmetic progressions of ``m`` with the linear bound, and close the argument
with residues of ``phi``. The certificate is JSON and can be re-checked from
scratch.
"""

from idealclose import certify_equal, check_certificate, parse_problem
from idealclose.certify import Certificate

spec = parse_problem("""
ring Q[x, y, z, w]
param m, n
family g(m) = x*y^(m+1) + z^(m+1) + w^(m+1)
compose f(n) = g(n^2)
""")
cert = certify_equal(spec.composed, k0=3, k1=30, max_stride=3)
for c in cert.shift_certs:
    print("certified:", c.describe(), "bound", c.verified_bound)
fact = cert.residue_facts[0]
print(f"n^2 mod {fact.modulus} lies in", sorted(r[0] for r in fact.covered_residues))
print("small cases:", [n[0] for n in cert.small_cases])

text = cert.to_json()
print("re-check:", check_certificate(Certificate.from_json(text), spec.composed).reason)

# Two outer parameters: g_(n^2, n), stride-(6, 2) progressions.
parabola = parse_problem("""
ring Q[x, y, z, w]
param n1, n2, n
family g(n1, n2) = x^(n1+1)*y + z^(n2+1) + w^(n1+1)
compose f(n) = g(n^2, n)
""")
cert = certify_equal(parabola.composed, k0=4, k1=(24, 8), max_stride=6)
print("progressions:", [c.describe() for c in cert.shift_certs])
print("modulus", cert.modulus, "frontier", cert.frontier)
