"""Why the exponent c cannot exceed p' = p/(p-1).

The private/common family puts n functions on n private atoms plus one shared
atom of weight; the sharpened inequality then holds at size n only
for c up to a threshold that climbs towards p' as n grows.  This script prints
that threshold and then finds a concrete size where c = 2 fails for p = 3.
"""

from __future__ import annotations

from triangle_cert.discrete import admissible_table, find_violation, log_sizes, p_prime
from triangle_cert.intervals import PrecisionContext, lower, to_float, upper

ctx = PrecisionContext(256)

for p in (3, 4):
    print(f"p = {p}: largest admissible c by family size (limit p' = {float(p_prime(p)):.6f})")
    for n, c in admissible_table(p, log_sizes(10**6), ctx):
        print(f"  n = {n:>8}  c_max = {to_float(c):.8f}")

rep = find_violation(3, 2, 10**6, ctx)
print(f"\np = 3, c = 2: first violating n = {rep.n}")
with ctx.active():
    print(f"  lower(lhs) = {float(lower(rep.lhs)):.6f} > upper(rhs) = {float(upper(rep.rhs)):.6f}: {lower(rep.lhs) > upper(rep.rhs)}")

rep = find_violation(2, 2, 10**5, ctx)
print(f"\np = 2, c = 2: violation up to 1e5? {'no' if rep.n is None else rep.n}")
