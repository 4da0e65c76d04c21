"""The ten acceptance criteria, each at its stated tolerance and runtime budget.

Every test prints one PASS/FAIL line (visible even under captured output).
"""

from __future__ import annotations

import math
import time
from contextlib import contextmanager
from fractions import Fraction

import pytest

from triangle_cert.constants import ConstantSet, critical_c
from triangle_cert.discrete import find_violation, kernel_trials, max_admissible_c, theorem1_trials
from triangle_cert.exact import SignSequence
from triangle_cert.functions import Tag, h, h_prime, h_second_at_one_closed, pseudo_for
from triangle_cert.intervals import PrecisionContext, lower, mid, radius, to_float, upper
from triangle_cert.lemmas import (
    EXACT_P_SET,
    G_DESCARTES,
    W_DESCARTES,
    _h_second_numeric,
    chain_consistency,
    verify_boundary,
    verify_endpoint_lemmas,
    verify_main_inequality,
    verify_sign_pattern,
)
from triangle_cert.optimize import (
    concavity_hinge,
    dax1_gap,
    phi_concavity_check,
    reduction_oracle,
    verify_num1,
    verify_two_function,
)
from triangle_cert.param_poly import build_P, build_Q, certified_sign_sequence, differentiate, eval_exact
from triangle_cert.registry import REGISTRY, verify_all_expansions
from triangle_cert.reports import parse_grid

CTX = PrecisionContext(256)


@contextmanager
def criterion(capsys, number: int, title: str, budget_s: float):
    t0 = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        dt = time.perf_counter() - t0
        within = dt < budget_s
        with capsys.disabled():
            verdict = "PASS" if ok and within else "FAIL"
            print(f"\n[acceptance {number:2d}] {verdict} {title} ({dt:.2f} s, budget {budget_s:g} s)")
    assert within, f"criterion {number} took {dt:.2f} s > {budget_s} s"


def test_criterion_01_appendix_reproduction(capsys):
    with criterion(capsys, 1, "exact appendix reproduction", 2):
        results = verify_all_expansions()
        assert all(r.passed for r in results), [r.lemma_id for r in results if not r.passed]
        assert REGISTRY.poly("N1")(3) == -104115456
        assert REGISTRY.shifted("R2")[-1] == 79920
        assert REGISTRY.shifted("P2")[-1] == 17126640
        assert abs(REGISTRY.shifted("H_u")[-1]) == 93952


def test_criterion_02_boundary_identities(capsys):
    with criterion(capsys, 2, "boundary identities", 10):
        P2 = differentiate(differentiate(build_P()))
        P1 = differentiate(build_P())
        for p in (Fraction(7, 2), 4, 5, 7, 10, 25, 50):
            P = Fraction(p)
            res = verify_boundary(P, CTX)
            assert all(r.passed for r in res), [r.lemma_id for r in res if not r.passed]
            with CTX.active():
                z = h(P, None, 0)
                assert mid(z) == 0 and radius(z) == 0
                for v in (h(P, None, 1), h_prime(P, None, 1)):
                    assert abs(mid(v)) + radius(v) <= 1e-50
                closed = mid(h_second_at_one_closed(P))
                numeric = _h_second_numeric(P, critical_c(P))
                assert abs(numeric - closed) <= 1e-6 * abs(closed)
            cs = ConstantSet.at(P)
            for c in (cs.c_L, cs.c_U, Fraction(2, 5)):
                assert eval_exact(build_P(), P, c, 1) == 0
                assert eval_exact(P1, P, c, 1) == 0
                assert eval_exact(P2, P, c, 1) == -9 * (P - 2) * (P - 1) ** 2
                assert eval_exact(build_Q(), P, c, 1) == -9 * (P - 1) ** 2 * (P - 2)


def test_criterion_03_sign_patterns(capsys):
    with criterion(capsys, 3, "certified sign patterns", 60):
        assert str(certified_sign_sequence(pseudo_for(Tag.G_FN), 3, None)) == str(G_DESCARTES)
        assert str(certified_sign_sequence(pseudo_for(Tag.W_FN), 3, None)) == str(W_DESCARTES)
        assert str(G_DESCARTES) == str(SignSequence.parse("(-,-,+,+,-,-,-,-,+,+)"))
        assert str(W_DESCARTES) == str(SignSequence.parse("(+,+,-,-,-,-,-,+,+)"))
        for p in EXACT_P_SET:
            for which in ("c_L", "c_U"):
                g = verify_sign_pattern(Tag.G_FN, p, which, CTX)
                w = verify_sign_pattern(Tag.W_FN, p, which, CTX)
                assert g.passed and w.passed, (p, which)
                assert g.witnesses["roots"] == 3 and w.witnesses["roots"] == 2
                assert w.witnesses["checks"]["interlacing s1 < u1 < s2 < u2 < s3"]
                assert w.witnesses["checks"]["Descartes signs over p > 3"]
                for a, b in g.witnesses["isolating intervals"] + w.witnesses["isolating intervals"]:
                    assert b - a <= Fraction(1, 10**9)


def test_criterion_04_endpoint_lemmas(capsys):
    with criterion(capsys, 4, "endpoint lemma suite", 60):
        grid = parse_grid("3.01:60:log:25")[1:]
        assert len(grid) == 24 and grid[0] > Fraction(301, 100) and grid[-1] == 60
        claims = {"Q'(1) < 0", "Q'(s_A) < 0", "g(s_A) > 0", "g(r) < 0", "g(1) < 0", "W(r) < 0", "H(r) > 0"}
        for p in list(EXACT_P_SET) + grid:
            res = verify_endpoint_lemmas(p, CTX)
            seen = set()
            for r in res:
                assert r.passed, (p, r.lemma_id, r.witnesses)
                seen |= set(r.witnesses)
            assert claims <= seen, (p, claims - seen)


def test_criterion_05_optimal_exponent(capsys):
    with criterion(capsys, 5, "optimal-exponent counterexample", 30):
        with CTX.active():
            for p in (Fraction(5, 2), Fraction(3), Fraction(4)):
                v = max_admissible_c(10**6, p, CTX)
                assert abs(to_float(v) - float(p / (p - 1))) <= 1e-4
        rep = find_violation(3, 2, 10**6, CTX)
        assert rep.n is not None
        with CTX.active():
            assert lower(rep.lhs) > upper(rep.rhs)
        assert find_violation(2, 2, 10**5, CTX).n is None


def test_criterion_06_discrete_overlap(capsys):
    with criterion(capsys, 6, "discrete overlap inequality spot checks", 120):
        for p in (2, 3, 4):
            r = theorem1_trials(p, 1000, seed=100 + p)
            assert r.passed, r.witnesses
            assert r.witnesses["min slack lower bound"] >= 0 and r.witnesses["undecided"] == 0
            k = kernel_trials(p, 100, seed=200 + p)
            assert k.passed and k.witnesses["min slack lower bound"] >= 0


def test_criterion_07_sampling(capsys):
    with criterion(capsys, 7, "main-inequality sampling", 60):
        for p in (3, 4, 5, 10):
            r = verify_main_inequality(p, 100_000, seed=p)
            assert r.passed, r.witnesses["checks"]
            assert r.witnesses["min slack"] >= -1e-12
            assert abs(r.witnesses["corner slack"]) <= 1e-10 and abs(r.witnesses["symmetric slack"]) <= 1e-10
            s = verify_num1(3, p, 100_000, seed=p)
            assert s.min_slack >= -1e-12
            assert abs(s.extras["corner slack"]) <= 1e-10 and abs(s.extras["symmetric slack"]) <= 1e-10
        for p in (2, 3, 4):
            d = verify_two_function(p, 100_000)
            assert d["min slack (c(p) form)"] >= -1e-12 and d["min slack (stronger form)"] >= -1e-12
            assert abs(d["corner slack"]) <= 1e-10 and abs(d["symmetric slack"]) <= 1e-10


def test_criterion_08_reduction_oracle(capsys):
    with criterion(capsys, 8, "two-value reduction oracle", 120):
        for n in (3, 4):
            for p in (3, 4):
                r = reduction_oracle(n, p, b_count=10)
                assert r.passed, r.witnesses
                assert len(r.witnesses["rows"]) == 10
                assert all(row["brute"] <= row["two-value"] + 1e-3 for row in r.witnesses["rows"])
                assert abs(r.witnesses["objective at b=0"] - 1) <= 1e-6
                assert abs(r.witnesses["objective at b=max"] - n ** (1 - 1 / p)) <= 1e-6


def test_criterion_09_concavity(capsys):
    with criterion(capsys, 9, "concavity", 20):
        for n in (3, 4, 6, 10):
            for p in (2, 3, 4, 8):
                d2, d1 = phi_concavity_check(n, p, 10_000)
                assert d2 <= 1e-10 and d1 >= -1e-12, (n, p)
                h0, h1 = concavity_hinge(n, p)
                assert h0 <= 0 and h1 <= 0, (n, p)
                assert dax1_gap(n, p) >= 0, (n, p)


def test_criterion_10_chain_consistency(capsys):
    with criterion(capsys, 10, "chain consistency", 10):
        r = chain_consistency(20, seed=0, ctx=CTX)
        assert r.passed, r.witnesses


@pytest.mark.parametrize("p", [4])
def test_critical_c_value_used_throughout(p):
    with CTX.active():
        assert abs(to_float(critical_c(p)) - math.log(2) / math.log(6)) < 1e-15
