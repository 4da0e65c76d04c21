from __future__ import annotations

import random
from fractions import Fraction

import mpmath
import pytest

from triangle_cert.constants import ConstantSet, critical_c
from triangle_cert.exact import SignSequence, poly_eval, sign_changes
from triangle_cert.intervals import PrecisionContext, contains, ivr, mid, radius
from triangle_cert.param_poly import (
    CMode,
    ParamCoeff,
    PseudoPoly,
    build_g,
    build_P,
    build_Q,
    build_W,
    certified_sign_sequence,
    clear_exponents,
    differentiate,
    eval_exact,
    eval_pseudo,
    euler_shift,
    sign_cells,
    transcription_report,
)

mono = PseudoPoly.from_terms


def test_eval_q_and_p_at_one():
    with PrecisionContext(256).active():
        for p, c in ((4, Fraction(2, 5)), (Fraction(9, 2), Fraction(1, 3))):
            P = Fraction(p)
            q1 = eval_pseudo(build_Q(), p, c, 1)
            assert contains(q1, -9 * (P - 1) ** 2 * (P - 2))
            assert contains(eval_pseudo(build_P(), p, c, 1), 0)
        assert contains(eval_pseudo(mono([(1, (0, 0))]), 7, Fraction(1, 3), Fraction(5, 2)), 1)
    with pytest.raises(ValueError):
        eval_pseudo(build_Q(), 4, Fraction(2, 5), 0)


def test_eval_exact_q_at_one():
    assert eval_exact(build_Q(), 4, Fraction(2, 5), 1) == -162


def test_differentiate_power_rule():
    d = differentiate(mono([(1, (1, 0))]))
    assert d.exponents() == [(1, -1)]
    assert d.coefficient(1, -1) == ParamCoeff.p()
    assert len(differentiate(PseudoPoly())) == 0


def test_q_second_derivative_matches_finite_difference():
    Q2 = differentiate(differentiate(build_Q()))
    with PrecisionContext(256).active():
        c = critical_c(4)
        h = Fraction(1, 10**5)
        f = [eval_pseudo(build_Q(), 4, c, 1 + k * h) for k in (-1, 0, 1)]
        fd = mid((f[0] - 2 * f[1] + f[2]) / ivr(h) ** 2)
        exact = mid(eval_pseudo(Q2, 4, c, 1))
        assert abs(fd - exact) <= 1e-6 * max(1, abs(exact))


def test_euler_shift_examples():
    g = build_g()
    W = euler_shift(g, (1, 1))
    assert len(g) == 10 and len(W) == 9
    assert W == build_W()
    assert len(euler_shift(mono([(1, (0, 0))]), (0, 0))) == 0
    assert len(euler_shift(mono([(1, (0, 2))]), (0, 2))) == 0


def test_clear_exponents():
    R = clear_exponents(mono([(1, (1, 0))]), 3, Fraction(1, 2))
    assert R.coeffs == (0, 0, 0, 1)
    with pytest.raises(ValueError):
        clear_exponents(mono([(1, (1, -4))]), 3, Fraction(1, 2))


def test_clear_exponents_preserves_sign():
    rng = random.Random(3)
    g = build_g()
    for p in (Fraction(7, 2), Fraction(9, 2)):
        c = ConstantSet.at(p).c_L
        R = clear_exponents(g, p, c)
        q = p.denominator
        with PrecisionContext(256).active():
            for _ in range(25):
                t = Fraction(rng.randint(1, 400), 100)
                v = eval_pseudo(g, p, c, t**q)
                exact = poly_eval(R, t)
                assert contains(v, exact)


def test_descartes_sequences():
    g_seq = certified_sign_sequence(build_g(), 3, 10**6, CMode.INTERVAL)
    w_seq = certified_sign_sequence(build_W(), 3, 10**6, CMode.INTERVAL)
    assert str(g_seq) == "(-,-,+,+,-,-,-,-,+,+)" and sign_changes(g_seq) == 3
    assert str(w_seq) == "(+,+,-,-,-,-,-,+,+)" and sign_changes(w_seq) == 2
    for mode in CMode:
        assert all(sign_changes(cell[2]) == 3 for cell in sign_cells(build_g(), 3, None, mode))
    assert str(certified_sign_sequence(mono([(1, (0, 0))]), 3, 4)) == str(SignSequence.parse("+"))


def test_crossover_at_four_splits_cells():
    cuts = [cell[0] for cell in sign_cells(build_g(), 3, None)]
    assert Fraction(4) in cuts


def test_transcriptions_agree():
    assert transcription_report() == []


def test_chain_identities_random_triples():
    rng = random.Random(11)
    P2 = differentiate(differentiate(build_P()))
    Q2 = differentiate(differentiate(build_Q()))
    with PrecisionContext(256).active():
        for _ in range(20):
            p = Fraction(rng.randint(301, 5000), 100)
            cs = ConstantSet.at(p)
            c = cs.c_L + (cs.c_U - cs.c_L) * Fraction(rng.randint(0, 100), 100)
            s = Fraction(rng.randint(1, 1000), 100)
            lhs = eval_pseudo(P2, p, c, s)
            rhs = ivr(s) ** ivr(p - 4) * eval_pseudo(build_Q(), p, c, s)
            assert abs(mid(lhs - rhs)) <= radius(lhs) + radius(rhs) + mpmath.mpf(2) ** -200 * (1 + abs(mid(lhs)))
            d = ivr(s) * eval_pseudo(Q2, p, c, s) - eval_pseudo(build_g(), p, c, s)
            assert abs(mid(d)) <= radius(d) + mpmath.mpf(2) ** -200 * (1 + abs(mid(lhs)))
