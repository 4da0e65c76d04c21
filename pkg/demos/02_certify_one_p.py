"""Certify every per-p claim at a single exponent, here p = 9/2.

Runs the constant brackets, the boundary identities, the exact sign patterns
of g and W at both ends of the c-bracket, and the endpoint lemmas, then prints
one line per result.  Pass another rational p on the command line to try it.
"""

from __future__ import annotations

import sys
from fractions import Fraction

from triangle_cert.constants import ConstantSet, verify_c_bounds
from triangle_cert.functions import Tag
from triangle_cert.intervals import PrecisionContext, to_float
from triangle_cert.lemmas import exact_route_available, verify_boundary, verify_endpoint_lemmas, verify_sign_pattern

p = Fraction(sys.argv[1]) if len(sys.argv) > 1 else Fraction(9, 2)
ctx = PrecisionContext(256)
cs = ConstantSet.at(p, ctx)
print(f"p = {p}:  c(p) ~ {to_float(cs.c_of_p):.12f}  in  [c_L, c_U] = [{cs.c_L}, {cs.c_U}]")
print(f"  s_A = {cs.s_A},  r = {cs.r}")

results = [verify_c_bounds(p, ctx), *verify_boundary(p, ctx)]
if exact_route_available(p):
    for tag in (Tag.G_FN, Tag.W_FN):
        for which in ("c_L", "c_U"):
            results.append(verify_sign_pattern(tag, p, which, ctx))
else:
    print("  (denominator of p too large for the exact sign-pattern route; skipped)")
results += verify_endpoint_lemmas(p, ctx)

for r in results:
    print(f"  {r.status.value:<13} {r.lemma_id:<28} {r.c_regime:<24} {r.elapsed_ms:8.1f} ms")
g = next(r for r in results if r.lemma_id.startswith("g") and r.c_regime == "c_L")
print("\n  g at c_L: pattern", g.witnesses["pattern"], "with roots in")
for a, b in g.witnesses["isolating intervals"]:
    print(f"    [{float(a):.12f}, {float(b):.12f}]")
print("all passed" if all(r.passed for r in results) else "SOMETHING FAILED")
