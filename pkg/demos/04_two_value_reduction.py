"""Maximising the l^1 norm on a slice of the l^p sphere.

Fix n, p > 2 and a level b for the normalised pair sum.  The claim under test
is that the maximum of sum x_i is attained by vectors taking at most two
distinct nonzero values.  The two-value scan searches only that family; the
brute-force grid searches everything (n <= 5).  The grid result should never
beat the scan by more than its resolution.
"""

from __future__ import annotations

import numpy as np

from triangle_cert.optimize import (
    SphereSliceProblem,
    brute_force_max,
    distinct_values,
    pairsum_max,
    phi_concavity_check,
    two_value_scan,
)

n, p = 3, 4.0
top = pairsum_max(n, p)
print(f"n = {n}, p = {p}: pair-sum level b ranges over [0, {top:.6f}]")
print(f"{'b':>10} {'two-value':>12} {'brute':>12} {'gap':>10}  shape of maximiser")
for b in np.linspace(0, top, 7):
    prob = SphereSliceProblem(n, p, float(b))
    tv = two_value_scan(prob)
    bf = brute_force_max(prob) if 0 < b < top else float("nan")
    vec = np.round(tv.vector(), 4).tolist()
    print(f"{b:10.5f} {tv.objective:12.8f} {bf:12.8f} {tv.objective - bf:10.2e}  {vec} ({distinct_values([v for v in tv.vector() if v > 1e-12])} nonzero values)")
print(f"\nendpoints: 1 at b = 0 and n^(1-1/p) = {n ** (1 - 1 / p):.8f} at b = max")

d2, d1 = phi_concavity_check(n, p)
print(f"phi_(n,p) on a 10^4 grid: max scaled second difference {d2:.2e}, min scaled slope {d1:.2e}")
