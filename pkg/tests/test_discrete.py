from __future__ import annotations

import random
from fractions import Fraction

import pytest

from triangle_cert.discrete import (
    AlphaMatrix,
    DiscreteInstance,
    build_private_common,
    family_sides,
    find_violation,
    kappa,
    kernel_trials,
    max_admissible_c,
    random_instance,
    theorem1_trials,
    tuple_sum,
    verify_carbery_discrete,
    verify_kernel_lemma,
    verify_l2_bound,
)
from triangle_cert.exact import Sign
from triangle_cert.intervals import PrecisionContext, contains, lower, overlaps, to_float, upper


def test_private_common_norms():
    inst = build_private_common(3, 3)
    assert inst.sum_norm_pow() == 30
    with pytest.raises(ValueError):
        build_private_common(2, 3)


def test_private_common_alpha_and_kappa():
    with PrecisionContext(256).active():
        for n, p in ((3, 3), (5, 4)):
            inst = build_private_common(n, p)
            A = AlphaMatrix.of(inst)
            assert A.is_symmetric() and A.in_unit_interval()
            assert all(A.entries[j][j] == 1 for j in range(n))
            assert abs(to_float(A.entries[0][1]) - 2 ** (-1 / p)) < 1e-15
            c = Fraction(3, 2)
            want = 1 + (n - 1) * 2 ** (-float(c) / p)
            assert abs(to_float(kappa(inst, c)) - want) < 1e-14


def test_max_admissible_c():
    with PrecisionContext(256).active():
        two = max_admissible_c(7, 2)
        assert contains(two, 2) and lower(two) == upper(two)
        assert abs(to_float(max_admissible_c(10**6, 3)) - 1.5) < 1e-4
        assert to_float(max_admissible_c(3, 3)) > 1.5
        assert abs(to_float(max_admissible_c(10**8, 3)) - 1.5) < 1e-3


def test_max_admissible_c_decreasing():
    with PrecisionContext(256).active():
        vals = [max_admissible_c(n, Fraction(5, 2)) for n in (3, 5, 10, 100, 1000, 10**5)]
        assert all(upper(b) < lower(a) for a, b in zip(vals, vals[1:]))


def test_find_violation_regression():
    rep = find_violation(3, 2, 10**6)
    # artifact-derived regression value for the private/common family
    assert rep.n == 4 and rep.neighbors_checked
    with PrecisionContext(256).active():
        assert lower(rep.lhs) > upper(rep.rhs)


def test_find_violation_none():
    assert find_violation(3, Fraction(7, 5), 10**6).n is None
    assert find_violation(2, 2, 10**5).n is None


def test_family_sides_match_carbery_with_c2():
    with PrecisionContext(256).active():
        for n in (3, 4, 8):
            inst = build_private_common(n, 3)
            s = verify_carbery_discrete(inst, 2)
            lhs, rhs = family_sides(n, 3, 2)
            assert overlaps(s.value, rhs - lhs)
        assert verify_carbery_discrete(build_private_common(4, 3), 2).sign is Sign.MINUS
        for n in (3, 5, 20):
            assert verify_carbery_discrete(build_private_common(n, 2), 2).nonnegative


def test_carbery_examples():
    assert verify_carbery_discrete(build_private_common(3, 3)).nonnegative
    single = DiscreteInstance.make([1, 2], [[3, Fraction(1, 2)]], 3)
    s = verify_carbery_discrete(single)
    assert s.value == 0
    disjoint = DiscreteInstance.make([1, 1], [[1, 0], [0, 2]], 2)
    assert verify_carbery_discrete(disjoint).value == 0
    with pytest.raises(ValueError):
        verify_carbery_discrete(DiscreteInstance.make([1], [], 2))


def test_l2_bound():
    disjoint = DiscreteInstance.make([1, 1, 3], [[1, 0, 0], [0, 2, 0], [0, 0, 5]], 2)
    assert verify_l2_bound(disjoint).value == 0
    same = DiscreteInstance.make([1, 2], [[1, 3]] * 4, 2)
    assert verify_l2_bound(same).value == 0
    rng = random.Random(5)
    for _ in range(100):
        assert verify_l2_bound(random_instance(rng, 2)).lower >= -Fraction(1, 10**12)
    with pytest.raises(ValueError):
        verify_l2_bound(build_private_common(3, 3))


def test_kernel_lemma_examples():
    m = 4
    ones = [[1] * m for _ in range(m)]
    s = verify_kernel_lemma(ones, [[1] * m, [1] * m], 2)
    assert s.lhs == m * m and s.value == 0
    eye = [[int(i == j) for j in range(3)] for i in range(3)]
    assert verify_kernel_lemma(eye, [[1, 2, 3], [3, 0, 1]], 2).nonnegative
    with pytest.raises(ValueError):
        verify_kernel_lemma(ones, [[1] * m], 2)


def test_kernel_lemma_random_p3():
    assert kernel_trials(3, 100, 0).passed


def test_tuple_sum_identity():
    rng = random.Random(2)
    for p in (2, 3, 4):
        for _ in range(20):
            inst = random_instance(rng, p, 5, 4)
            assert tuple_sum(inst) == inst.sum_norm_pow()
    with pytest.raises(ValueError):
        tuple_sum(build_private_common(3, Fraction(5, 2)))


def test_weight_scaling_keeps_sign():
    for n, p, c in ((4, 3, 2), (3, 3, Fraction(3, 2)), (6, 4, Fraction(3, 2))):
        inst = build_private_common(n, p)
        base = verify_carbery_discrete(inst, c).sign
        for lam in (Fraction(1, 7), Fraction(3), Fraction(1000)):
            assert verify_carbery_discrete(inst.scaled(lam), c).sign is base


def test_alpha_matrix_properties_random():
    rng = random.Random(9)
    with PrecisionContext(128).active():
        for _ in range(30):
            inst = random_instance(rng, 3)
            A = AlphaMatrix.of(inst)
            assert A.is_symmetric() and A.in_unit_interval()


def test_theorem1_small_batch():
    r = theorem1_trials(3, 60, 1)
    assert r.passed and r.witnesses["undecided"] == 0


def test_text_round_trip_and_errors():
    inst = DiscreteInstance.make([Fraction(1, 2), 3], [[1, Fraction(2, 3)], [0, 5]], 4)
    again = DiscreteInstance.from_text(inst.to_text(), 4)
    assert again == inst
    with pytest.raises(ValueError):
        DiscreteInstance.from_text("atoms 2\n1/1\n", 3)
    with pytest.raises(ValueError):
        DiscreteInstance.make([1, -1], [[1, 1]], 3)
