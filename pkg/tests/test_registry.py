from __future__ import annotations

import time
from fractions import Fraction

import pytest

from triangle_cert.registry import REGISTRY, identity_checks, verify_all_expansions, verify_appendix_expansion


def test_all_expansions_pass_quickly():
    t0 = time.perf_counter()
    results = verify_all_expansions()
    assert time.perf_counter() - t0 < 2
    bad = [r.lemma_id for r in results if not r.passed]
    assert not bad
    assert len(results) == len(REGISTRY.names())


def test_anchor_values():
    assert REGISTRY.poly("N1")(3) == -104115456
    assert REGISTRY.shifted("R2")[-1] == 79920
    assert REGISTRY.shifted("P2")[-1] == 17126640
    assert REGISTRY.shifted("H_u")[-1] == -93952


def test_required_names_present():
    for name in ("A_u", "B_u", "C_u", "D", "H_u", "A", "B", "C", "N_B", "N_D", "N1", "G", "M", "K",
                 "N2", "R", "A2", "R2", "P2", "a2", "a1", "a0", "b2", "b1", "b0",
                 "L0", "L1", "L2", "U0", "U1", "U2"):
        assert name in REGISTRY


def test_unknown_name_errors():
    with pytest.raises(KeyError):
        verify_appendix_expansion("no-such-polynomial")


def test_result_ids_and_witnesses():
    r = verify_appendix_expansion("N1")
    assert r.lemma_id == "appendix:N1" and r.passed
    assert r.witnesses["anchor"]["value"] == -104115456


@pytest.mark.parametrize("p", [4, 5, 7])
@pytest.mark.parametrize("c", [Fraction(2, 5), Fraction(1, 3)])
def test_reduction_identities(p, c):
    checks = identity_checks(p, c)
    assert checks and all(checks.values()), checks
