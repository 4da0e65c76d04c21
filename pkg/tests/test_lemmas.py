from __future__ import annotations

import math
from fractions import Fraction

import pytest

from triangle_cert.functions import Tag
from triangle_cert.intervals import PrecisionContext
from triangle_cert.lemmas import (
    EXACT_P_SET,
    chain_consistency,
    exact_route_available,
    run_p_suite,
    sami1_slack,
    sof1_slack,
    verify_boundary,
    verify_descartes,
    verify_endpoint_lemmas,
    verify_h_nonneg,
    verify_main_inequality,
    verify_sign_pattern,
    verify_tek11,
)
from triangle_cert.results import Status

ctx = PrecisionContext(256)


def _ids(results):
    return {r.lemma_id: r for r in results}


@pytest.mark.parametrize("p", [Fraction(7, 2), 4, 25])
def test_boundary_suite(p):
    res = _ids(verify_boundary(p, ctx))
    assert {"tek-1", "tex01", "P-boundary", "dax91", "Q-prime-signs"} <= set(res)
    assert all(r.passed for r in res.values())


def test_boundary_p4_witnesses():
    res = _ids(verify_boundary(4, ctx))
    w = res["tek-1"].witnesses
    assert abs(float(w["h''(1) closed"].mid) - 0.2596) < 1e-4
    assert w["relative error"] < 1e-6
    c4 = math.log(2) / math.log(6)
    assert abs(float(res["P-boundary"].witnesses["P(0)"].mid) - (96 * c4 - 52)) < 1e-12
    assert res["dax91"].witnesses["Q(0)"] == 72


@pytest.mark.parametrize("tag", [Tag.G_FN, Tag.W_FN, Tag.Q_FN, Tag.Q_PRIME])
def test_sign_patterns_at_four(tag):
    r = verify_sign_pattern(tag, 4, None, ctx)
    assert r.passed, r.witnesses


def test_g_pattern_at_seven_halves_c_upper():
    r = verify_sign_pattern(Tag.G_FN, Fraction(7, 2), "c_U", ctx)
    assert r.passed and r.witnesses["roots"] == 3


def test_w_interlacing_at_four_c_lower():
    r = verify_sign_pattern(Tag.W_FN, 4, "c_L", ctx)
    assert r.passed
    assert r.witnesses["checks"]["interlacing s1 < u1 < s2 < u2 < s3"]
    for a, b in r.witnesses["isolating intervals"]:
        assert b - a <= Fraction(1, 10**9)


def test_h_prime_pattern():
    r = verify_sign_pattern(Tag.H_PRIME, 4, None, ctx)
    assert r.passed and r.lemma_id == "sign-1"


def test_sign_pattern_rejects_large_denominators():
    assert not exact_route_available(Fraction(301, 100))
    with pytest.raises(ValueError):
        verify_sign_pattern(Tag.G_FN, Fraction(301, 100), "c_L", ctx)
    # the per-p suite falls back to the numeric h' pattern only
    out = run_p_suite("patterns", Fraction(301, 100), ctx)
    assert [r.lemma_id for r in out] == ["sign-1"] and out[0].passed


@pytest.mark.parametrize("p", [4, Fraction(301, 100), Fraction(3000001, 1000000), 60])
def test_endpoint_lemmas(p):
    res = verify_endpoint_lemmas(p, ctx)
    assert {r.lemma_id for r in res} == {"Q-prime-signs", "QpsA-Hr", "g-three-changes", "W-at-r"}
    assert all(r.status is Status.PASS for r in res), [r.witnesses for r in res if not r.passed]


def test_tek11_at_four():
    assert verify_tek11(4, ctx).passed


def test_descartes_suite():
    res = verify_descartes()
    assert {r.lemma_id for r in res} == {"g-at-most-3", "W-two-zeros"}
    assert all(r.passed for r in res)


def test_h_nonneg_p4():
    r = verify_h_nonneg(4, None, ctx)
    assert r.passed and r.lemma_id == "h-nonneg"


def test_main_inequality_equality_points():
    r = verify_main_inequality(5, 20_000, 0)
    assert r.passed
    assert abs(r.witnesses["corner slack"]) <= 1e-10
    assert abs(r.witnesses["symmetric slack"]) <= 1e-10
    assert abs(float(sami1_slack(1.0, 0.0, 0.0, 4.0, 0.38))) < 1e-15


def test_diagonal_forms_consistent():
    import numpy as np

    t = np.logspace(-3, 3, 50)
    x = (1 + 2 * t**4) ** -0.25
    assert np.allclose(sami1_slack(x, t * x, t * x, 4.0, 0.3868528072), sof1_slack(t, 4.0, 0.3868528072), atol=1e-12)


def test_chain_consistency():
    assert chain_consistency(8, 1, ctx).passed


def test_exact_p_set_matches_contract():
    assert EXACT_P_SET == (Fraction(7, 2), Fraction(4), Fraction(9, 2), Fraction(5), Fraction(6), Fraction(8))
