from __future__ import annotations

import math
import random
from fractions import Fraction

import numpy as np
import pytest

from triangle_cert.discrete import DiscreteInstance, random_instance
from triangle_cert.optimize import (
    SphereSliceProblem,
    beta_float,
    brute_force_max,
    concavity_hinge,
    dax1_gap,
    distinct_values,
    gamma_p,
    num1_slack,
    pairsum_max,
    phi,
    phi_concavity_check,
    two_value_scan,
    verify_cfl_discrete,
    verify_num1,
    verify_two_function,
)


def test_pairsum_max():
    assert pairsum_max(3, 2) == pytest.approx(1.0)
    assert pairsum_max(4, 4) == pytest.approx(3.0)
    assert pairsum_max(3, 1e9) == pytest.approx(3.0, rel=1e-6)


def test_problem_window():
    with pytest.raises(ValueError):
        SphereSliceProblem(3, 4, pairsum_max(3, 4) + 0.1)
    with pytest.raises(ValueError):
        SphereSliceProblem(3, 2, 0.5)


def test_two_value_endpoints():
    for n, p in ((3, 3), (4, 4)):
        assert two_value_scan(SphereSliceProblem(n, p, 0.0)).objective == pytest.approx(1.0, abs=1e-6)
        top = SphereSliceProblem(n, p, pairsum_max(n, p))
        assert two_value_scan(top).objective == pytest.approx(n ** (1 - 1 / p), abs=1e-6)


def test_two_value_vs_brute():
    prob = SphereSliceProblem(3, 4, 0.5)
    tv = two_value_scan(prob)
    r1, r2 = prob.residuals(tv.vector())
    assert abs(r1) < 1e-10 and abs(r2) < 1e-9
    assert abs(brute_force_max(prob) - tv.objective) < 1e-3
    prob = SphereSliceProblem(4, 4, 1.5)
    assert brute_force_max(prob) <= two_value_scan(prob).objective + 1e-3


def test_brute_force_examples_and_guard():
    assert brute_force_max(SphereSliceProblem(3, 3, 1e-4)) == pytest.approx(1.0, abs=1e-2)
    top = SphereSliceProblem(3, 3, pairsum_max(3, 3) * (1 - 1e-9))
    assert brute_force_max(top, 0.01) == pytest.approx(3 ** (2 / 3), abs=1e-3)
    with pytest.raises(ValueError):
        brute_force_max(SphereSliceProblem(6, 3, 1.0))


def test_gamma_p():
    assert gamma_p([1, 1, 1], 3, 4) == pytest.approx(1.0)
    assert gamma_p([0, 2, 0], 3, 4) == 0.0
    assert gamma_p([1, 1], 2, 2) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        gamma_p([0, 0, 0], 3, 4)
    rng = np.random.default_rng(0)
    for n in (2, 3, 5, 8):
        for p in (2.0, 3.0, 6.0):
            for a in np.abs(rng.standard_normal((2000, n))):
                g = gamma_p(a, n, p)
                assert -1e-12 <= g <= 1 + 1e-12


def test_num1_examples():
    s = verify_num1(3, 4, 20_000, 0)
    assert s.min_slack >= -1e-12 and not s.diagnostic
    assert abs(s.extras["symmetric slack"]) < 1e-10 and abs(s.extras["corner slack"]) < 1e-15
    assert distinct_values(s.witness) <= 3
    diag = verify_num1(5, 3, 5_000, 0)
    assert diag.diagnostic


def test_phi_values_and_domain():
    assert phi(3, 4, 0.0) == 1.0
    b = beta_float(3, 4)
    t = np.linspace(0, 3 ** 2 / 3, 7)
    assert np.allclose(phi(3, 4, t), (1 + (2 * t) ** b) ** 3)
    with pytest.raises(ValueError):
        phi(3, 4, -0.1)


def test_phi_concave_and_increasing():
    d2, d1 = phi_concavity_check(4, 3, 10_000)
    assert d2 <= 1e-10 and d1 >= -1e-12


def test_concavity_hinge_examples():
    assert concavity_hinge(3, 2) == (0.0, 0.0)
    for n, p in ((4, 4), (10, 3)):
        h0, h1 = concavity_hinge(n, p)
        assert h0 <= 0 and h1 <= 0
        assert dax1_gap(n, p) >= 0


def test_cfl_reduces_to_num1_for_indicators():
    a = np.array([0.5, 0.7, 0.3])
    a = a / (a**4).sum() ** 0.25
    inst = DiscreteInstance.make([1], [[Fraction(float(x))] for x in a], 4)
    b = beta_float(3, 4)
    assert verify_cfl_discrete(inst) == pytest.approx(float(num1_slack(a, 3, 4, b)[0]), abs=1e-12)


def test_cfl_random_and_disjoint():
    rng = random.Random(4)
    worst = math.inf
    for _ in range(1000):
        inst = random_instance(rng, 4, 6, 3)
        if inst.n != 3:
            continue
        worst = min(worst, verify_cfl_discrete(inst))
    assert worst >= -1e-10
    disjoint = DiscreteInstance.make([1, 2, 3], [[1, 0, 0], [0, 2, 0], [0, 0, 1]], 4)
    assert verify_cfl_discrete(disjoint) >= -1e-12


def test_two_function():
    for p in (2, 3, 4):
        d = verify_two_function(p, 20_000)
        assert d["min slack (c(p) form)"] >= -1e-12
        assert d["min slack (stronger form)"] >= -1e-12
        assert abs(d["corner slack"]) < 1e-15 and abs(d["symmetric slack"]) < 1e-12


def test_scan_is_order_independent():
    prob = SphereSliceProblem(4, 3, 1.2)
    assert two_value_scan(prob).objective == two_value_scan(SphereSliceProblem(4, 3, 1.2)).objective
