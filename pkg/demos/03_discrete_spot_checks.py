"""The discrete sharpened triangle inequality in exact rational arithmetic.

For n functions on finitely many weighted atoms the bound reads
    ||f_1 + ... + f_n||_p^p <= kappa^(p-1) * sum_j ||f_j||_p^p,
where kappa is the largest row sum of the overlap matrix alpha^(p').  The
overlap of disjoint functions is 0 and of proportional ones is 1.  Disjoint
and identical families are equality cases; other families leave a gap.
"""

from __future__ import annotations

from triangle_cert.discrete import AlphaMatrix, DiscreteInstance, kernel_trials, theorem1_trials, verify_carbery_discrete
from triangle_cert.intervals import to_float

p = 3
cases = {
    "disjoint": DiscreteInstance.make([1, 1, 1], [[1, 0, 0], [0, 2, 0], [0, 0, 3]], p),
    "identical": DiscreteInstance.make([1, 2], [[1, 2], [1, 2]], p),
    "proportional": DiscreteInstance.make([1, 2], [[1, 2], [3, 6]], p),
    "generic": DiscreteInstance.make([1, 1, 2], [[1, 2, 0], [0, 1, 1], [2, 0, 1]], p),
}
for name, inst in cases.items():
    s = verify_carbery_discrete(inst)
    value = s.value if not hasattr(s.value, "a") else f"~{to_float(s.value):.6f}"
    print(f"{name:>12}: lhs = {s.lhs}  slack = {value}  nonnegative: {s.nonnegative}")
    alpha = AlphaMatrix.of(inst)
    print(f"{'':>12}  alpha symmetric: {alpha.is_symmetric()}  entries in [0, 1]: {alpha.in_unit_interval()}")

print("\nrandom instances (exact where possible, intervals otherwise):")
for p in (2, 3, 4):
    r = theorem1_trials(p, 200, seed=p)
    k = kernel_trials(p, 50, seed=p)
    print(f"  p = {p}: {r.status.value}  min slack >= {float(r.witnesses['min slack lower bound']):.3g}"
          f"  undecided {r.witnesses['undecided']}   kernel lemma {k.status.value}")
