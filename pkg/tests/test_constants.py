from __future__ import annotations

import math
from fractions import Fraction

import pytest

from triangle_cert.constants import (
    ConstantSet,
    beta,
    cfl_r,
    critical_c,
    nice_identity_n3,
    nice_identity_residual,
    rational_p,
    verify_c_bounds,
)
from triangle_cert.intervals import PrecisionContext, contains, lower, overlaps, radius, to_float, upper


def test_critical_c_values():
    with PrecisionContext(256).active():
        assert to_float(critical_c(2)) == 1.0
        assert abs(to_float(critical_c(4)) - math.log(2) / math.log(6)) < 1e-15
        assert abs(to_float(critical_c(3)) - math.log(4) / math.log(12)) < 1e-15
    with pytest.raises(ValueError):
        critical_c(Fraction(3, 2))


def test_beta_values():
    with PrecisionContext(256).active():
        assert to_float(beta(2, 5)) == pytest.approx(0.4)
        assert overlaps(beta(3, 4), critical_c(4))
        assert contains(beta(3, 2), 1)
    with pytest.raises(ValueError):
        beta(1, 4)


def test_beta3_equals_c_on_grid():
    with PrecisionContext(256).active():
        for k in range(0, 99, 7):
            p = Fraction(2) + k
            assert overlaps(beta(3, p), critical_c(p))


def test_c_decreasing():
    ps = [Fraction(2) + Fraction(k, 3) for k in range(40)]
    with PrecisionContext(256).active():
        cs = [critical_c(p) for p in ps]
        assert all(upper(b) < lower(a) for a, b in zip(cs, cs[1:]))


def test_verify_c_bounds():
    for p in (4, Fraction(3) + Fraction(1, 10**9), 100):
        assert verify_c_bounds(p).passed
    with pytest.raises(ValueError):
        verify_c_bounds(3)


def test_c_bounds_at_4_explicit():
    with PrecisionContext(256).active():
        c = critical_c(4)
        assert Fraction(5, 13) < lower(c) and upper(c) < Fraction(4, 10)


def test_nice_identity():
    with PrecisionContext(256).active():
        r = nice_identity_n3(4)
        assert contains(r, 0) and radius(r) < 1e-60
        assert contains(nice_identity_n3(2), 0)
        assert not contains(nice_identity_residual(4, 4), 0)


def test_conjugate_and_cfl_r():
    for p in (Fraction(5, 2), Fraction(3), Fraction(17, 4)):
        cs = ConstantSet.at(p)
        assert 1 / cs.p + 1 / cs.p_prime == 1
        assert cfl_r(2, p) == Fraction(4) / (4 + 3 * (p - 2)) < 2 / p


def test_windows_on_grid():
    for k in range(200):
        p = 3 + Fraction(57 * (k + 1), 200)
        assert all(ConstantSet.at(p).window_checks().values()), p


def test_rational_p_from_float_uses_decimal_repr():
    assert rational_p(3.01) == Fraction(301, 100)
