"""
Scanning membership: the Fermat polynomials
===========================================

``x^n + y^n - z^n`` for all ``n >= 3`` lie in the ideal generated by the
three members ``n = 3, 4, 5``. The scan writes a CSV that can be plotted.
"""

import tempfile
from pathlib import Path

from idealclose import parse_problem, scan
from idealclose.cli import emit_scan_csv
from idealclose.family import instantiate

spec = parse_problem("""
ring Q[x, y, z]
param n
family f(n) = x^n + y^n - z^n
""")
fam = spec.family
J = [instantiate(fam, (n,)) for n in (3, 4, 5)]
lattice = scan(fam, J, (30,))
print("members of J among f_0..f_30:", [m[0] for m in lattice.members()])

out = Path(tempfile.mkdtemp()) / "fermat.csv"
emit_scan_csv(lattice, out)
print(out.read_text().splitlines()[:5])
