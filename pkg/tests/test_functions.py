from __future__ import annotations

from fractions import Fraction

import mpmath
import pytest

from triangle_cert.constants import critical_c
from triangle_cert.functions import (
    Tag,
    bracket_multiplier,
    eval_named,
    h,
    h_bracket,
    h_second_at_one_closed,
    h_second_at_one_general,
    psi,
    psi_prime,
    psi_prime_via_P,
    rescaled_bracket,
)
from triangle_cert.intervals import PrecisionContext, contains, ivr, mid, overlaps, radius, sign_of, to_float


def test_h_at_zero_exact_and_at_one_small():
    with PrecisionContext(256).active():
        z = h(4, None, 0)
        assert mid(z) == 0 and radius(z) == 0
        assert abs(mid(h(4, None, 1))) + radius(h(4, None, 1)) < 1e-50


def test_h_second_closed_forms():
    with PrecisionContext(256).active():
        a, b = h_second_at_one_closed(4), h_second_at_one_general(4)
        assert overlaps(a, b)
        assert abs(to_float(a) - 0.2596) < 1e-3
        c2 = critical_c(4) / 2
        assert not overlaps(h_second_at_one_closed(4, c2), h_second_at_one_general(4, c2))


def test_psi_at_one_limit_and_errors():
    with PrecisionContext(256).active():
        for p in (4, 7):
            P = Fraction(p)
            want = mpmath.log(3 / ((2 * P - 1) * mid(critical_c(P))))
            assert abs(mid(psi(p, None, 1)) - want) < 1e-30
        with pytest.raises(ValueError, match="s\\^\\(p-1\\) - 1"):
            psi(4, None, 1, limit=False)
        with pytest.raises(ValueError):
            psi(4, None, mpmath.iv.mpf([0.9, 1.1]))


def test_psi_at_zero_sign():
    with PrecisionContext(256).active():
        v = psi(4, None, Fraction(1, 10**30))
        want = -mpmath.log(3 * mid(critical_c(4)))
        assert abs(mid(v) - want) < 1e-20


def test_q_at_zero():
    with PrecisionContext(256).active():
        for p in (4, 5):
            v = eval_named(Tag.Q_FN, p, None, Fraction(1, 10**40))
            assert abs(mid(v) - 4 * (p - 1) ** 2 * (p - 2) * (p - 3)) < 1e-20


def test_multiplier_sign_and_bracket_relation():
    with PrecisionContext(256).active():
        for s in (Fraction(1, 5), Fraction(1, 2), Fraction(3, 2), Fraction(7)):
            m = bracket_multiplier(4, None, s)
            assert sign_of(m).value == ("-" if s < 1 else "+")
            prod = h_bracket(4, None, s) * m
            assert overlaps(prod, rescaled_bracket(4, None, s))


def test_psi_prime_two_routes():
    with PrecisionContext(256).active():
        for s in (Fraction(1, 3), Fraction(5, 2), Fraction(9)):
            a, b = psi_prime(5, None, s), psi_prime_via_P(5, None, s)
            assert overlaps(a, b)


def test_tail_of_h():
    with PrecisionContext(256).active():
        assert abs(to_float(h(4, None, 10**6))) < 1e-3


def test_eval_named_dispatch():
    with PrecisionContext(256).active():
        assert contains(eval_named("P_FN", 4, Fraction(2, 5), 1), 0)
        assert overlaps(eval_named(Tag.H_FN, 4, None, Fraction(1, 2)), h(4, None, Fraction(1, 2)))
        assert overlaps(eval_named(Tag.PSI, 4, None, 3), psi(4, None, 3))
        assert ivr(1) is not None
