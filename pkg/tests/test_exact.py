from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from triangle_cert.exact import (
    IndeterminateSignError,
    RatPoly,
    Sign,
    SignSequence,
    count_roots,
    isolate_roots,
    poly_eval,
    positivity_certificate,
    sign_changes,
    sturm_chain,
    taylor_shift,
)
from triangle_cert.registry import REGISTRY

x = RatPoly.x()
rationals = st.fractions(min_value=-20, max_value=20, max_denominator=50)
polys = st.lists(rationals, min_size=1, max_size=7).map(RatPoly)


def test_poly_eval_basic():
    assert poly_eval(x * x - 2, 0) == -2
    assert poly_eval(RatPoly(), Fraction(7, 3)) == 0


def test_poly_eval_n1_anchor():
    assert poly_eval(REGISTRY.poly("N1"), 3) == -104115456


def test_taylor_shift_examples():
    assert taylor_shift(x * x - 2, 1) == x * x + 2 * x - 1
    assert taylor_shift(RatPoly.constant(5), Fraction(9, 7)) == RatPoly.constant(5)


def test_taylor_shift_h_expansion():
    want = [-93952, -222112, -224040, -123822, -39280, -6678, -468]
    assert taylor_shift(REGISTRY.poly("H_u"), 3).coeffs == tuple(Fraction(c) for c in want)


def test_positivity_certificates():
    cert = positivity_certificate(REGISTRY.poly("N2"), 3)
    assert cert.holds and len(cert.shifted.coeffs) == 11
    assert all(c > 0 for c in cert.shifted.coeffs)
    assert positivity_certificate(REGISTRY.poly("R"), 3).holds
    bad = positivity_certificate(x - 5, 3)
    assert not bad.holds and bad.first_negative == 0


def test_sturm_chain_textbook():
    chain = sturm_chain(x * x - 2)
    assert [P.coeffs for P in chain.polys] == [(-2, 0, 1), (0, 2), (2,)]


def test_sturm_chain_non_squarefree_and_zero():
    chain = sturm_chain(x**3)
    assert chain.polys[-1].degree >= 0
    with pytest.raises(ValueError):
        sturm_chain(RatPoly())


def test_sturm_degrees_decrease_for_l0():
    chain = sturm_chain(REGISTRY.poly("L0"))
    degs = chain.degrees
    assert len(degs) <= 10
    assert all(a > b for a, b in zip(degs[1:], degs[2:]))


def test_count_roots_examples():
    assert count_roots(x * x - 2, 0, 2) == 1
    assert count_roots(x * x - 2, 2, 3) == 0
    assert count_roots(REGISTRY.poly("U0"), 3, 10**6) == 0


def test_count_roots_endpoint_root_is_pushed_outward():
    # root at the endpoint 1 of (1, 2]: counted after moving lo outward
    assert count_roots(x - 1, 1, 2) == 1


def test_sign_changes_examples():
    assert sign_changes(SignSequence.parse("(-,-,+,+,-,-,-,-,+,+)")) == 3
    assert sign_changes(SignSequence.parse("(+,+,-,-,-,-,-,+,+)")) == 2
    assert sign_changes(SignSequence.parse("(+,0,+)")) == 0
    with pytest.raises(IndeterminateSignError):
        sign_changes([Sign.PLUS, Sign.INDETERMINATE])


def test_sign_changes_palindromes():
    for text in ("+-+", "-++-", "+0-0+"):
        seq = SignSequence.parse(text)
        assert sign_changes(seq) == sign_changes(list(reversed(seq.entries)))


def test_isolate_roots_examples():
    ivs = isolate_roots(x * x - 2, 0, 2, Fraction(1, 1024))
    assert len(ivs) == 1
    a, b = ivs[0]
    assert a < Fraction(14142, 10000) < b and b - a <= Fraction(1, 1024)
    ivs = isolate_roots((x - 1) ** 2, 0, 2, Fraction(1, 100))
    assert len(ivs) == 1 and ivs[0][0] < 1 < ivs[0][1]
    assert isolate_roots(REGISTRY.poly("L2"), 3, 100, Fraction(1, 10**6)) == []


@settings(max_examples=60, deadline=None)
@given(polys, rationals)
def test_shift_then_eval_at_zero(P, a):
    assert poly_eval(taylor_shift(P, a), 0) == poly_eval(P, a)


@settings(max_examples=40, deadline=None)
@given(polys, st.fractions(min_value=Fraction(1, 10), max_value=10, max_denominator=20))
def test_count_roots_scale_invariant(P, k):
    if P.is_zero() or P.degree < 1:
        return
    assert count_roots(P, -3, 5) == count_roots(P * RatPoly.constant(k), -3, 5)


@settings(max_examples=40, deadline=None)
@given(polys)
def test_certificate_implies_no_roots(P):
    if P.is_zero() or P.degree < 1:
        return
    cert = positivity_certificate(P, 1)
    if cert.holds:
        for B in (2, 10, 1000):
            assert count_roots(P, 1, B) == 0
