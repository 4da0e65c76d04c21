"""Runnable checks for the chain of lemmas behind h >= 0.

Every check returns :class:`LemmaResult` objects with stable ids.  Signs at
c = c(p) are certified with interval arithmetic; at rational c the exact routes
(clearing exponents, Sturm counts, Taylor-shift certificates) are used.
"""

from __future__ import annotations

import math
import time
from fractions import Fraction

import mpmath
import numpy as np
from mpmath import iv

from .constants import ConstantSet, critical_c, rational_p
from .exact import (
    RatPoly,
    Sign,
    SignSequence,
    count_roots,
    isolate_roots,
    poly_eval,
    sign_changes,
    squarefree_part,
)
from .functions import (
    Tag,
    bracket_multiplier,
    h,
    h_bracket,
    h_prime,
    h_second_at_one_closed,
    h_second_at_one_general,
    psi,
    psi_prime,
    psi_prime_via_P,
    pseudo_for,
    rescaled_bracket,
)
from .intervals import (
    Interval,
    PrecisionContext,
    ctx_or_default,
    ivr,
    mid,
    overlaps,
    sign_of,
)
from .param_poly import (
    CMode,
    PseudoPoly,
    clear_exponents,
    differentiate,
    eval_exact,
    eval_pseudo,
    poly_sign_on,
    sign_cells,
)
from .registry import verify_appendix_expansion
from .results import LemmaResult, Status

MAX_BITS = 4096
MAX_CLEARED_DEGREE = 100
G_DESCARTES = SignSequence.parse("(-,-,+,+,-,-,-,-,+,+)")
W_DESCARTES = SignSequence.parse("(+,+,-,-,-,-,-,+,+)")
EXACT_P_SET = (Fraction(7, 2), Fraction(4), Fraction(9, 2), Fraction(5), Fraction(6), Fraction(8))

_EXPECTED_PATTERN = {
    Tag.G_FN: "(-,+,-,+)",
    Tag.W_FN: "(+,-,+)",
    Tag.Q_FN: "(+,-,+)",
    Tag.Q_PRIME: "(+,-,+)",
    Tag.H_PRIME: "(+,-,+,-)",
}
_PATTERN_ID = {
    Tag.G_FN: "g-at-most-3",
    Tag.W_FN: "W-two-zeros",
    Tag.Q_FN: "dax91",
    Tag.Q_PRIME: "Q-prime-signs",
    Tag.H_PRIME: "sign-1",
}


def _ms(t0: float) -> float:
    return (time.perf_counter() - t0) * 1000


def _status(ok: bool, undecided: bool = False) -> Status:
    if ok:
        return Status.PASS
    return Status.INDETERMINATE if undecided else Status.FAIL


def _abs_hi(x: Interval) -> mpmath.mpf:
    return max(abs(mpmath.mpf(x._mpi_[0])), abs(mpmath.mpf(x._mpi_[1])))


def _sign_check(x: Interval, expected: Sign) -> Status:
    s = sign_of(x)
    if s is expected:
        return Status.PASS
    if s is Sign.INDETERMINATE:
        return Status.INDETERMINATE
    return Status.FAIL


def _sample_cs(P: Fraction) -> list[Fraction]:
    return [Fraction(5) / (4 * P - 3), Fraction(4) / (3 * P - 2), Fraction(2, 5)]


def _leading_sign(F: PseudoPoly, P: Fraction, C: Interval) -> Sign:
    m = F.leading(P)
    return sign_of(ivr(m.coeff.eval(P, C)))


def _lowest_coeff(F: PseudoPoly, P: Fraction, a: int, b: int, C):
    return F.coefficient(a, b).eval(P, C)


# ---------------------------------------------------------------------------
# boundary values


def _h_second_numeric(P: Fraction, C: Interval) -> mpmath.mpf:
    """Central second difference of h at 1, step 1e-5, with one Richardson step."""
    cm = mid(C)
    step = Fraction(1, 10**5)

    def d2(hh: Fraction) -> mpmath.mpf:
        vals = [mid(h(P, cm, 1 + k * hh)) for k in (-1, 0, 1)]
        return (vals[0] - 2 * vals[1] + vals[2]) / (mpmath.mpf(hh.numerator) / hh.denominator) ** 2

    return (4 * d2(step / 2) - d2(step)) / 3


def verify_boundary(p, ctx: PrecisionContext | int | None = None) -> list[LemmaResult]:
    """Boundary values and tails of h, psi, P, Q, Q' and g(1).

    Returns results with ids tek-1, tex01, P-boundary, dax91 and Q-prime-signs.
    """
    P = rational_p(p)
    if P < 3:
        raise ValueError("boundary checks need p >= 3")
    ctx = ctx_or_default(ctx)
    out: list[LemmaResult] = []
    with ctx.active():
        C = critical_c(P)
        tol = mpmath.mpf(10) ** -50

        # h
        t0 = time.perf_counter()
        h0, h1, hp1 = h(P, None, 0), h(P, None, 1), h_prime(P, None, 1)
        closed = h_second_at_one_closed(P)
        general = h_second_at_one_general(P)
        half_c = C / 2
        closed_half = h_second_at_one_closed(P, half_c)
        general_half = h_second_at_one_general(P, half_c)
        numeric = _h_second_numeric(P, C)
        rel = abs(numeric - mid(closed)) / abs(mid(closed))
        tail = h(P, None, 10**6)
        checks = {
            "h(0) = 0 exactly": sign_of(h0) is Sign.ZERO,
            "|h(1)| <= 1e-50": _abs_hi(h1) <= tol,
            "|h'(1)| <= 1e-50": _abs_hi(hp1) <= tol,
            "h''(1) closed forms agree at c(p)": overlaps(closed, general),
            "h''(1) closed forms differ at c(p)/2": not overlaps(closed_half, general_half),
            "h''(1) numeric within 1e-6": rel <= mpmath.mpf("1e-6"),
            "h''(1) > 0": sign_of(closed) is Sign.PLUS,
            "|h(1e6)| <= 1e-3": _abs_hi(tail) <= mpmath.mpf("1e-3"),
        }
        out.append(
            LemmaResult(
                "tek-1",
                _status(all(checks.values())),
                p=P,
                witnesses={
                    "checks": checks,
                    "h(1)": h1,
                    "h'(1)": hp1,
                    "h''(1) closed": closed,
                    "h''(1) numeric": numeric,
                    "relative error": rel,
                    "h(1e6)": tail,
                },
                elapsed_ms=_ms(t0),
            )
        )

        # psi
        t0 = time.perf_counter()
        psi0, psi1 = psi(P, None, 0), psi(P, None, 1)
        psi0_closed = -iv.log(ivr(P - 1) * C)
        psi1_closed = iv.log(3 / (ivr(2 * P - 1) * C))
        tail_exponent = ivr(P) * C / 2 - 1  # psi ~ (pc/2 - 1) log s at infinity
        checks = {
            "psi(0) matches -log((p-1)c)": overlaps(psi0, psi0_closed),
            "psi(0) < 0": sign_of(psi0) is Sign.MINUS,
            "psi(1) matches log(3/((2p-1)c))": overlaps(psi1, psi1_closed),
            "psi(1) > 0": sign_of(psi1) is Sign.PLUS,
            "psi -> -inf (pc/2 < 1)": sign_of(tail_exponent) is Sign.MINUS,
        }
        out.append(
            LemmaResult(
                "tex01",
                _status(all(checks.values())),
                p=P,
                witnesses={"checks": checks, "psi(0)": psi0, "psi(1)": psi1, "tail exponent": tail_exponent},
                elapsed_ms=_ms(t0),
            )
        )

        # P
        t0 = time.perf_counter()
        FP = pseudo_for(Tag.P_FN)
        dP = differentiate(FP)
        d2P = differentiate(dP)
        exact_rows = []
        ok_exact = True
        for c in _sample_cs(P):
            row = {
                "c": c,
                "P(1)": eval_exact(FP, P, c, 1),
                "P'(1)": eval_exact(dP, P, c, 1),
                "P''(1)": eval_exact(d2P, P, c, 1),
            }
            ok_exact &= row["P(1)"] == 0 and row["P'(1)"] == 0 and row["P''(1)"] == -9 * (P - 2) * (P - 1) ** 2
            exact_rows.append(row)
        p0 = ivr(_lowest_coeff(FP, P, 0, 0, C))
        p0_closed = 8 * C * ivr(P * P) - 8 * C * ivr(P) - ivr(16 * P - 12)
        checks = {
            "P(1) = P'(1) = 0, P''(1) = -9(p-2)(p-1)^2 at rational c": ok_exact,
            "P(0) matches 8cp^2-8cp-16p+12": overlaps(p0, p0_closed),
            "P(0) < 0": sign_of(p0) is Sign.MINUS,
            "P -> +inf (leading coefficient > 0)": _leading_sign(FP, P, C) is Sign.PLUS,
        }
        out.append(
            LemmaResult(
                "P-boundary",
                _status(all(checks.values())),
                p=P,
                c_regime="c(p) and rational c",
                witnesses={"checks": checks, "exact": exact_rows, "P(0)": p0},
                elapsed_ms=_ms(t0),
            )
        )

        # Q
        t0 = time.perf_counter()
        FQ = pseudo_for(Tag.Q_FN)
        q0 = _lowest_coeff(FQ, P, 0, 0, Fraction(0))
        q0_expected = 4 * (P - 1) ** 2 * (P - 2) * (P - 3)
        q1_rows = [{"c": c, "Q(1)": eval_exact(FQ, P, c, 1)} for c in _sample_cs(P)]
        checks = {
            "Q(0) = 4(p-1)^2(p-2)(p-3)": q0 == q0_expected,
            "Q(0) > 0" if P > 3 else "Q(0) = 0 at p = 3": q0 > 0 if P > 3 else q0 == 0,
            "Q(1) = -9(p-1)^2(p-2) at rational c": all(r["Q(1)"] == -9 * (P - 1) ** 2 * (P - 2) for r in q1_rows),
            "Q -> +inf (leading coefficient > 0)": _leading_sign(FQ, P, C) is Sign.PLUS,
        }
        out.append(
            LemmaResult(
                "dax91",
                _status(all(checks.values())),
                p=P,
                c_regime="c(p) and rational c",
                witnesses={"checks": checks, "Q(0)": q0, "Q(1)": q1_rows},
                elapsed_ms=_ms(t0),
            )
        )

        # Q' and g(1) = Q''(1)
        t0 = time.perf_counter()
        FQ1 = pseudo_for(Tag.Q_PRIME)
        FG = pseudo_for(Tag.G_FN)
        rows = []
        ok_exact = True
        for c in _sample_cs(P):
            q1 = eval_exact(FQ1, P, c, 1)
            g1 = eval_exact(FG, P, c, 1)
            ok_exact &= q1 == -18 * (P - 1) ** 2 * (2 * P - 1) * (2 * c * P * P - c * P - 2 * P - 2)
            ok_exact &= g1 == -6 * P * (P - 1) ** 2 * (8 * c * (2 * P - 1) * (3 * P * P - 2 * P + 1) - (54 * P * P - P + 2))
            rows.append({"c": c, "Q'(1)": q1, "g(1)": g1})
        q1c = eval_pseudo(FQ1, P, C, 1)
        g1c = eval_pseudo(FG, P, C, 1)
        qd0 = ivr(_lowest_coeff(FQ, P, 0, 1, C))
        checks = {
            "Q'(1) and g(1) closed forms at rational c": ok_exact,
            "Q'(0) > 0": sign_of(qd0) is Sign.PLUS,
            "Q'(1) < 0": sign_of(q1c) is Sign.MINUS,
            "g(1) < 0": sign_of(g1c) is Sign.MINUS,
            "Q' -> +inf (leading coefficient > 0)": _leading_sign(FQ1, P, C) is Sign.PLUS,
        }
        undecided = any(sign_of(x) is Sign.INDETERMINATE for x in (qd0, q1c, g1c))
        out.append(
            LemmaResult(
                "Q-prime-signs",
                _status(all(checks.values()), undecided),
                p=P,
                c_regime="c(p) and rational c",
                witnesses={"checks": checks, "exact": rows, "Q'(0)": qd0, "Q'(1)": q1c, "g(1)": g1c},
                elapsed_ms=_ms(t0),
                note="" if not undecided else f"stalled at {ctx.bits} bits",
            )
        )
    return out


# ---------------------------------------------------------------------------
# sign patterns and roots


def _cleared_degree(F: PseudoPoly, P: Fraction) -> int:
    return int(max(m.exponent_at(P) for m in F) * P.denominator)


def _strip_t_power(R: RatPoly) -> RatPoly:
    k = 0
    while k < len(R.coeffs) and R.coeffs[k] == 0:
        k += 1
    return RatPoly(R.coeffs[k:])


def positive_root_intervals(F: PseudoPoly, p, c, width=Fraction(1, 10**9)):
    """Isolating intervals in s for the distinct positive roots of F at rational (p, c).

    Works on the cleared polynomial in t (s = t^q); returned s-intervals are
    exact rational and no wider than ``width``.
    """
    P, C = rational_p(p), Fraction(c)
    q = P.denominator
    R = squarefree_part(_strip_t_power(clear_exponents(F, P, C)))
    n = count_roots(R, 0, None)
    w_t = Fraction(width)
    while True:
        ivs = isolate_roots(R, 0, None, w_t)
        s_ivs = [(a**q, b**q) for a, b in ivs]
        if all(b - a <= width for a, b in s_ivs):
            break
        w_t /= 2 * q
    return R, n, ivs, s_ivs


def _pattern_from_roots(R: RatPoly, t_ivs) -> SignSequence:
    probes = []
    if t_ivs:
        probes.append(t_ivs[0][0] / 2)
        probes += [(b + a2) / 2 for (_, b), (a2, _) in zip(t_ivs, t_ivs[1:])]
        probes.append(t_ivs[-1][1] + 1)
    else:
        probes.append(Fraction(1))
    return SignSequence(tuple(Sign.of(poly_eval(R, x)) for x in probes))


def _interval_of(a: Fraction, b: Fraction) -> Interval:
    return iv.mpf([mpmath.mpf(ivr(a)._mpi_[0]), mpmath.mpf(ivr(b)._mpi_[1])])


def _c_for(P: Fraction, c) -> tuple[Fraction | None, str]:
    if c is None:
        return None, "c(p)"
    if c == "c_L":
        return Fraction(5) / (4 * P - 3), "c_L"
    if c == "c_U":
        return Fraction(4) / (3 * P - 2), "c_U"
    return Fraction(c), f"c = {Fraction(c)}"


def _h_prime_pattern(P: Fraction, ctx: PrecisionContext) -> LemmaResult:
    """Numeric sign pattern of h' at c(p): scan, then certified bisection of each flip."""
    t0 = time.perf_counter()
    with ctx.active():
        grid = sorted({Fraction(mpmath.nstr(mpmath.mpf(10) ** (k / 40), 12)) for k in range(-160, 161)} - {Fraction(1)})
        signs = [sign_of(h_prime(P, None, s)) for s in grid]
        if Sign.INDETERMINATE in signs:
            return LemmaResult("sign-1", Status.INDETERMINATE, p=P, note=f"grid sign undecided at {ctx.bits} bits", elapsed_ms=_ms(t0))
        roots = []
        for (a, sa), (b, sb) in zip(zip(grid, signs), zip(grid[1:], signs[1:])):
            if sa is sb:
                continue
            if a < 1 < b:
                roots.append((Fraction(1), Fraction(1)))
                continue
            lo, hi = a, b
            while hi - lo > Fraction(1, 10**12):
                m = (lo + hi) / 2
                sm = sign_of(h_prime(P, None, m))
                if sm is Sign.INDETERMINATE or sm is Sign.ZERO:
                    break
                lo, hi = (m, hi) if sm is sa else (lo, m)
            roots.append((lo, hi))
        pattern = SignSequence(tuple(s for i, s in enumerate(signs) if i == 0 or s is not signs[i - 1]))
        # the multiplier flips the bracket of h' on (0,1) only
        rel_ok = True
        for s in (Fraction(1, 7), Fraction(1, 2), Fraction(9, 10), Fraction(11, 10), Fraction(3), Fraction(40)):
            b = sign_of(h_bracket(P, None, s))
            m = sign_of(bracket_multiplier(P, None, s))
            r = sign_of(rescaled_bracket(P, None, s))
            rel_ok &= m is (Sign.MINUS if s < 1 else Sign.PLUS)
            rel_ok &= r is (b if s > 1 else -b)
    ok = str(pattern) == _EXPECTED_PATTERN[Tag.H_PRIME] and len(roots) == 3 and roots[0][1] < 1 < roots[2][0]
    return LemmaResult(
        "sign-1",
        _status(ok and rel_ok),
        p=P,
        witnesses={
            "pattern": pattern,
            "q1": roots[0] if roots else None,
            "q2": roots[-1] if roots else None,
            "multiplier relation": rel_ok,
        },
        note="numeric scan on [1e-4, 1e4] with certified signs at grid points",
        elapsed_ms=_ms(t0),
    )


def verify_sign_pattern(tag: Tag | str, p, c=None, ctx: PrecisionContext | int | None = None) -> LemmaResult:
    """Sign pattern of a named function on (0, inf) with root witnesses.

    For g, W, Q, Q' at rational c ("c_L", "c_U" or a rational) the pattern is exact;
    c=None uses the exact route at both c_L and c_U.  For h' the check is numeric at c(p).
    """
    tag = Tag(tag)
    P = rational_p(p)
    ctx = ctx_or_default(ctx)
    if tag is Tag.H_PRIME:
        return _h_prime_pattern(P, ctx)
    if tag not in _EXPECTED_PATTERN:
        raise ValueError(f"no sign pattern registered for {tag.value}")
    if c is None:
        parts = [verify_sign_pattern(tag, P, which, ctx) for which in ("c_L", "c_U")]
        return LemmaResult(
            parts[0].lemma_id,
            Status.combine(r.status for r in parts),
            p=P,
            c_regime="c_L and c_U",
            witnesses={r.c_regime: r.witnesses for r in parts},
            elapsed_ms=sum(r.elapsed_ms for r in parts),
        )
    t0 = time.perf_counter()
    C, regime = _c_for(P, c)
    F = pseudo_for(tag)
    if _cleared_degree(F, P) > MAX_CLEARED_DEGREE:
        raise ValueError(f"p = {P} clears to degree above {MAX_CLEARED_DEGREE}; use a rational p with small denominator")
    R, n, t_ivs, s_ivs = positive_root_intervals(F, P, C)
    pattern = _pattern_from_roots(R, t_ivs)
    expected = _EXPECTED_PATTERN[tag]
    wit = {"roots": n, "pattern": pattern, "isolating intervals": [list(x) for x in s_ivs]}
    checks = {"pattern": str(pattern) == expected, "root count": n == len(expected.split(",")) - 1}
    if tag in (Tag.G_FN, Tag.W_FN):
        descartes = sign_cells(F, 3, None, CMode.INTERVAL)
        want = G_DESCARTES if tag is Tag.G_FN else W_DESCARTES
        checks["Descartes signs over p > 3"] = all(
            tuple(cell[2].entries) == tuple(want.entries) for cell in descartes
        )
        wit["Descartes"] = str(descartes[-1][2])
        wit["sign changes"] = sign_changes(descartes[-1][2])
    if tag is Tag.W_FN:
        _, _, _, g_ivs = positive_root_intervals(pseudo_for(Tag.G_FN), P, C)
        order = []
        for i, iv_ in enumerate(g_ivs):
            order.append(("s", i + 1, iv_))
            if i < len(s_ivs):
                order.append(("u", i + 1, s_ivs[i]))
        inter = len(g_ivs) == 3 and len(s_ivs) == 2 and all(x[2][1] < y[2][0] for x, y in zip(order, order[1:]))
        checks["interlacing s1 < u1 < s2 < u2 < s3"] = inter
        wit["s roots"] = [list(x) for x in g_ivs]
        wit["u roots"] = [list(x) for x in s_ivs]
    wit["checks"] = checks
    return LemmaResult(
        _PATTERN_ID[tag],
        _status(all(checks.values())),
        p=P,
        c_regime=regime,
        witnesses=wit,
        elapsed_ms=_ms(t0),
    )


# ---------------------------------------------------------------------------
# endpoint lemmas

_CLAIM_ROUTES = {
    # claim: (tag, point, sign, bracket upper end, registry polynomials)
    "Q'(1) < 0": (Tag.Q_PRIME, "1", Sign.MINUS, "c_U", ()),
    "Q'(s_A) < 0": (Tag.Q_PRIME, "s_A", Sign.MINUS, "c_U", ("A_u", "D", "H_u", "-B-4A", "A", "N")),
    "g(s_A) > 0": (Tag.G_FN, "s_A", Sign.PLUS, "c_U", ("a2", "F8", "F7", "c0a1+b1", "N8", "N7")),
    "g(r) < 0": (Tag.G_FN, "r", Sign.MINUS, "2/p", ("U1_num", "V1_num", "N1", "G", "A2", "R2", "P2")),
    "g(1) < 0": (Tag.G_FN, "1", Sign.MINUS, "c_U", ()),
    "W(r) < 0": (Tag.W_FN, "r", Sign.MINUS, "c_U", ("L0", "L1", "L2", "U0", "U1", "U2")),
    "H(r) > 0": (Tag.BIG_H, "r", Sign.PLUS, "c_plus", ("B_c", "N_B", "M/p", "N_D", "N2", "R")),
}
_CLAIM_GROUPS = {
    "Q-prime-signs": ("Q'(1) < 0",),
    "QpsA-Hr": ("Q'(s_A) < 0", "H(r) > 0"),
    "g-three-changes": ("g(s_A) > 0", "g(r) < 0", "g(1) < 0"),
    "W-at-r": ("W(r) < 0",),
}

_pp = RatPoly.x()
# closed forms at c = c_L, multiplied by 4p-3 > 0; positivity gives g(1) < 0 and Q'(1) < 0 for c >= c_L
G1_AT_CL = 40 * (2 * _pp - 1) * (3 * _pp * _pp - 2 * _pp + 1) - (54 * _pp * _pp - _pp + 2) * (4 * _pp - 3)
Q1_AT_CL = 5 * (2 * _pp * _pp - _pp) - (2 * _pp + 2) * (4 * _pp - 3)


def _registry_route(names, cs: ConstantSet, point: str) -> tuple[bool, dict]:
    """p-independent certificate chain plus the windows it needs at this p."""
    detail = {}
    ok = True
    for n in names:
        r = verify_appendix_expansion(n)
        detail[n] = r.status.value
        ok &= r.passed
    w = cs.window_checks()
    if point == "s_A":
        need = ("x_sA > 1/8", "x_sA < 17/125")
    elif names and names[0] == "L0":
        need = ("x_r > 1/e", "x_r <= 27/64")
    elif point == "r" and "B_c" in names:
        u = ivr(cs.r) ** ivr(cs.p - 1)
        bound = ivr(2 * cs.p**2 / (5 * cs.p**2 - 5 * cs.p + 2))
        detail["r^(p-1) < 2p^2/(5p^2-5p+2)"] = sign_of(bound - u) is Sign.PLUS
        ok &= detail["r^(p-1) < 2p^2/(5p^2-5p+2)"]
        need = ()
    else:
        need = ("x_r > 9/25", "x_r <= 27/64")
    for k in need:
        detail[k] = w[k]
        ok &= w[k]
    return ok, detail


def _endpoint_claim(claim: str, cs: ConstantSet, ctx: PrecisionContext) -> dict:
    tag, point, want, top, names = _CLAIM_ROUTES[claim]
    P = cs.p
    F = pseudo_for(tag)
    s = {"1": Fraction(1), "s_A": cs.s_A, "r": cs.r}[point]
    c_hi = {"c_U": cs.c_U, "2/p": 2 / P, "c_plus": cs.c_plus}[top]
    info: dict = {"bracket": [cs.c_L, c_hi]}
    bits = ctx.bits
    while True:
        with PrecisionContext(bits).active():
            C = critical_c(P)
            val = eval_pseudo(F, P, C, s)
            st = _sign_check(val, want)
            if st is not Status.INDETERMINATE or bits >= MAX_BITS:
                break
        bits *= 2
    info["interval"] = {"value": val, "status": st.value, "bits": bits}
    with PrecisionContext(bits).active():
        ends = [eval_exact(F, P, cc, s) if s == 1 else eval_pseudo(F, P, cc, s) for cc in (cs.c_L, c_hi)]
        end_signs = [Sign.of(e) if isinstance(e, Fraction) else sign_of(e) for e in ends]
        inside = sign_of(C - ivr(cs.c_L)) is Sign.PLUS and sign_of(ivr(c_hi) - C) is Sign.PLUS
    if all(e is want for e in end_signs) and inside:
        b_status = Status.PASS
    elif all(e is -want for e in end_signs) and inside:
        b_status = Status.FAIL
    else:
        b_status = Status.INDETERMINATE
    info["c-endpoints"] = {"signs": [e.value for e in end_signs], "status": b_status.value}
    if names:
        r_ok, detail = _registry_route(names, cs, point)
    else:
        R = G1_AT_CL if tag is Tag.G_FN else Q1_AT_CL
        r_ok = poly_sign_on(R, Fraction(3), None) is Sign.PLUS
        detail = {"closed form at c_L": r_ok}
    info["certificate chain"] = {"certified": r_ok, "detail": detail}
    routes = [n for n, ok in (("interval", st is Status.PASS), ("c-endpoints", b_status is Status.PASS), ("certificate chain", r_ok)) if ok]
    info["certified by"] = routes
    if st is Status.FAIL or b_status is Status.FAIL:
        info["status"] = Status.FAIL
    elif st is Status.PASS:
        info["status"] = Status.PASS
    else:
        info["status"] = Status.INDETERMINATE
    return info


def verify_endpoint_lemmas(p, ctx: PrecisionContext | int | None = None) -> list[LemmaResult]:
    """Signs of Q', g, W, H at 1, s_A and r for c = c(p), by up to three routes.

    A claim passes when the interval route certifies it at c(p) and no route
    contradicts it; the routes that certified are listed in the witnesses.
    """
    P = rational_p(p)
    if P <= 3:
        raise ValueError("endpoint lemmas are claimed for p > 3")
    ctx = ctx_or_default(ctx)
    cs = ConstantSet.at(P, ctx)
    out = []
    for lemma_id, claims in _CLAIM_GROUPS.items():
        t0 = time.perf_counter()
        infos = {cl: _endpoint_claim(cl, cs, ctx) for cl in claims}
        wit: dict = {cl: {k: v for k, v in info.items() if k != "status"} for cl, info in infos.items()}
        if lemma_id == "W-at-r":
            with ctx.active():
                F = pseudo_for(Tag.W_FN)
                cm = (cs.c_L + cs.c_U) / 2
                vals = [eval_pseudo(F, P, cc, cs.r) for cc in (cs.c_L, cm, cs.c_U)]
                resid = vals[1] - (vals[0] + vals[2]) / 2
                wit["affinity residual"] = resid
                affine_ok = sign_of(resid) in (Sign.ZERO, Sign.INDETERMINATE) and _abs_hi(resid) < mpmath.mpf(10) ** -30
                wit["affine in c"] = affine_ok
                if not affine_ok:
                    infos["affine"] = {"status": Status.FAIL}
        if lemma_id == "g-three-changes":
            # part (i): g < 0 near 0, through the sign of the coefficient of s
            with ctx.active():
                G = pseudo_for(Tag.G_FN)
                a1 = ivr(G.coefficient(0, 1).eval(P, critical_c(P)))
                near0 = eval_pseudo(G, P, critical_c(P), Fraction(1, 10**4))
                wit["coefficient of s"] = a1
                wit["g(1e-4)"] = near0
                if sign_of(a1) is not Sign.MINUS or sign_of(near0) is not Sign.MINUS:
                    infos["near 0"] = {"status": Status.FAIL}
        status = Status.combine(i["status"] for i in infos.values())
        bits_used = max(i["interval"]["bits"] for cl, i in infos.items() if cl in claims)
        out.append(
            LemmaResult(
                lemma_id,
                status,
                p=P,
                witnesses=wit,
                note=f"{bits_used} bits" if status is not Status.INDETERMINATE else f"stalled at {bits_used} bits",
                elapsed_ms=_ms(t0),
            )
        )
    return out


def verify_tek11(p, ctx: PrecisionContext | int | None = None) -> LemmaResult:
    """Q' < 0 at every positive zero of g (equivalently H > 0 there).

    Exact at c_L and c_U (Sturm count of Q' on each isolating interval of g) and
    certified at c(p) by bracketing the zeros of g and enclosing Q' on the brackets.
    """
    P = rational_p(p)
    ctx = ctx_or_default(ctx)
    t0 = time.perf_counter()
    G, Q1 = pseudo_for(Tag.G_FN), pseudo_for(Tag.Q_PRIME)
    checks = {}
    wit: dict = {}
    exact_ok = _cleared_degree(G, P) <= MAX_CLEARED_DEGREE
    for regime in ("c_L", "c_U") if exact_ok else ():
        C, _ = _c_for(P, regime)
        R, n, t_ivs, s_ivs = positive_root_intervals(G, P, C, Fraction(1, 10**6))
        RQ = clear_exponents(Q1, P, C)
        ok = n == 3
        for a, b in t_ivs:
            ok &= count_roots(RQ, a, b) == 0 and poly_eval(RQ, (a + b) / 2) < 0
        checks[f"exact at {regime}"] = ok
    with ctx.active():
        C = critical_c(P)
        grid = [Fraction(mpmath.nstr(mpmath.mpf(10) ** (k / 80), 10)) for k in range(-160, 81)]
        signs = [sign_of(eval_pseudo(G, P, C, s)) for s in grid]
        brackets = []
        for (a, sa), (b, sb) in zip(zip(grid, signs), zip(grid[1:], signs[1:])):
            if sa is not sb:
                lo, hi = a, b
                for _ in range(40):
                    m = (lo + hi) / 2
                    sm = sign_of(eval_pseudo(G, P, C, m))
                    if sm not in (Sign.PLUS, Sign.MINUS):
                        break
                    lo, hi = (m, hi) if sm is sa else (lo, m)
                brackets.append((lo, hi))
        q_vals = [eval_pseudo(Q1, P, C, _interval_of(a, b)) for a, b in brackets]
        checks["three zeros of g at c(p)"] = len(brackets) == 3 and Sign.INDETERMINATE not in signs
        checks["Q' < 0 on each bracket at c(p)"] = all(sign_of(v) is Sign.MINUS for v in q_vals)
        wit["zeros of g at c(p)"] = [list(b) for b in brackets]
        wit["Q' on brackets"] = q_vals
    wit["checks"] = checks
    if not exact_ok:
        wit["exact route"] = f"skipped: cleared degree above {MAX_CLEARED_DEGREE}"
    return LemmaResult("tek11", _status(all(checks.values())), p=P, c_regime="c(p), c_L, c_U", witnesses=wit, elapsed_ms=_ms(t0))


def verify_descartes(p_lo=3, p_hi=None) -> list[LemmaResult]:
    """Coefficient sign sequences of g and W over p in (p_lo, p_hi) in every c regime."""
    out = []
    for tag, want, lemma_id in ((Tag.G_FN, G_DESCARTES, "g-at-most-3"), (Tag.W_FN, W_DESCARTES, "W-two-zeros")):
        t0 = time.perf_counter()
        F = pseudo_for(tag)
        wit = {}
        ok = True
        for mode in CMode:
            cells = sign_cells(F, p_lo, p_hi, mode)
            wit[mode.value] = [{"cell": [a, b], "signs": str(seq), "labels": list(seq.labels)} for a, b, seq in cells]
            ok &= all(tuple(seq.entries) == tuple(want.entries) for _, _, seq in cells)
        wit["sign changes"] = sign_changes(want)
        out.append(LemmaResult(lemma_id, _status(ok), p=f"({p_lo}, {p_hi or 'inf'})", c_regime="c_L, c_U, [c_L, c_U]", witnesses=wit, elapsed_ms=_ms(t0)))
    return out


# ---------------------------------------------------------------------------
# numeric sampling of h and of the three-variable inequality


def _h_float(p: float, c: float, s: np.ndarray) -> np.ndarray:
    ls = np.log(s)
    lsp2 = np.logaddexp(p * ls, math.log(2))
    first = np.exp(c * (math.log(2) + 0.5 * p * np.log(2 * s + 1) - lsp2))
    second = np.exp((p * np.log(s + 2) - lsp2) / (p - 1))
    return first - second + 1


def verify_h_nonneg(p, s_grid=None, ctx: PrecisionContext | int | None = None) -> LemmaResult:
    """Minimum of h over a log grid (default 10^4 points on [1e-3, 1e3]) plus refinement."""
    P = rational_p(p)
    ctx = ctx_or_default(ctx)
    t0 = time.perf_counter()
    s = np.logspace(-3, 3, 10_000) if s_grid is None else np.asarray(s_grid, dtype=float)
    with ctx.active():
        c = float(mid(critical_c(P)))
    vals = _h_float(float(P), c, s)
    k = int(np.argmin(vals))
    # refine: certified enclosures at the grid minimum and its neighbours
    with ctx.active():
        refine = {float(s[j]): h(P, None, Fraction(repr(float(s[j])))) for j in range(max(k - 1, 0), min(k + 2, len(s)))}
        at1 = h(P, None, 1)
        tail = h(P, None, 10**6)
        min_refined = min(mpmath.mpf(x._mpi_[0]) for x in refine.values())
    checks = {
        "grid min >= -1e-12": float(vals[k]) >= -1e-12,
        "refined min >= -1e-12": min_refined >= mpmath.mpf("-1e-12"),
        "h(1) = 0 within radius": sign_of(at1) in (Sign.ZERO, Sign.INDETERMINATE),
        "|h(1e6)| <= 1e-3": _abs_hi(tail) <= mpmath.mpf("1e-3"),
    }
    return LemmaResult(
        "h-nonneg",
        _status(all(checks.values())),
        p=P,
        witnesses={"checks": checks, "min": float(vals[k]), "argmin": float(s[k]), "h(1e6)": tail, "refined": refine},
        elapsed_ms=_ms(t0),
    )


def sami1_slack(x, y, z, p: float, c: float):
    """1 + (2(xy+xz+yz)^(p/2))^c - (x+y+z)^(p/(p-1))."""
    x, y, z = np.asarray(x, float), np.asarray(y, float), np.asarray(z, float)
    e2 = x * y + x * z + y * z
    return 1 + (2 * e2 ** (p / 2)) ** c - (x + y + z) ** (p / (p - 1))


def sof1_slack(t, p: float, c: float):
    """Diagonal form: y = z = t x with x^p + 2y^p = 1."""
    t = np.asarray(t, float)
    x = (1 + 2 * t**p) ** (-1 / p)
    y = t * x
    return 1 + 2**c * (2 * x * y + y * y) ** (p * c / 2) - (x + 2 * y) ** (p / (p - 1))


def verify_main_inequality(p, samples: int = 100_000, seed: int = 0) -> LemmaResult:
    """Min slack of the three-variable inequality on x^p + y^p + z^p = 1."""
    P = rational_p(p)
    if P < 3:
        raise ValueError("the three-variable inequality is claimed for p >= 3")
    t0 = time.perf_counter()
    pf = float(P)
    with PrecisionContext().active():
        c = float(mid(critical_c(P)))
    rng = np.random.default_rng(seed)
    u = rng.dirichlet(np.ones(3), size=samples)
    xyz = u ** (1 / pf)
    rand = sami1_slack(xyz[:, 0], xyz[:, 1], xyz[:, 2], pf, c)
    # boundary z = 0
    a = np.linspace(0, 1, 2001)
    bnd = sami1_slack(a ** (1 / pf), (1 - a) ** (1 / pf), 0 * a, pf, c)
    # diagonal y = z, through both forms
    t = np.logspace(-4, 4, 4001)
    x = (1 + 2 * t**pf) ** (-1 / pf)
    diag_sami = sami1_slack(x, t * x, t * x, pf, c)
    diag_sof = sof1_slack(t, pf, c)
    cross = float(np.max(np.abs(diag_sami - diag_sof)))
    sym_pt = 3 ** (-1 / pf)
    sym = float(sami1_slack(sym_pt, sym_pt, sym_pt, pf, c))
    corner = float(sami1_slack(1.0, 0.0, 0.0, pf, c))
    all_min = min(float(rand.min()), float(bnd.min()), float(diag_sami.min()))
    j = int(np.argmin(rand))
    checks = {
        "min slack >= -1e-12": all_min >= -1e-12,
        "equality at (1,0,0)": abs(corner) <= 1e-10,
        "equality at symmetric point": abs(sym) <= 1e-10,
        "diagonal forms agree": cross <= 1e-12,
    }
    return LemmaResult(
        "sami1",
        _status(all(checks.values())),
        p=P,
        witnesses={
            "checks": checks,
            "min slack": all_min,
            "random min": float(rand.min()),
            "random argmin": xyz[j].tolist(),
            "boundary min": float(bnd.min()),
            "diagonal min": float(diag_sami.min()),
            "symmetric slack": sym,
            "corner slack": corner,
            "diagonal cross-residual": cross,
            "samples": samples,
            "seed": seed,
        },
        elapsed_ms=_ms(t0),
    )


def chain_consistency(n_triples: int = 20, seed: int = 0, ctx: PrecisionContext | int | None = None) -> LemmaResult:
    """Random (p, c(p), s) triples: P'' vs s^(p-4) Q, sQ'' vs g, W vs s g' - (p+1) g,
    H vs sQ'' - (p+1)Q', and psi' (numeric) vs -P / denominator."""
    ctx = ctx_or_default(ctx)
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    FP, FQ = pseudo_for(Tag.P_FN), pseudo_for(Tag.Q_FN)
    d2P = differentiate(differentiate(FP))
    Q1, Q2 = pseudo_for(Tag.Q_PRIME), pseudo_for(Tag.Q_PP)
    G, W, H = pseudo_for(Tag.G_FN), pseudo_for(Tag.W_FN), pseudo_for(Tag.BIG_H)
    dG = differentiate(G)
    rows = []
    ok = True
    with ctx.active():
        for _ in range(n_triples):
            P = Fraction(int(rng.integers(3010, 30000)), 1000)
            s = Fraction(int(rng.integers(10, 3000)), 1000)
            if abs(s - 1) <= Fraction(1, 20):
                s += Fraction(1, 10)
            C = critical_c(P)
            S = ivr(s)
            r1 = eval_pseudo(d2P, P, C, s) - S ** ivr(P - 4) * eval_pseudo(FQ, P, C, s)
            r2 = S * eval_pseudo(Q2, P, C, s) - eval_pseudo(G, P, C, s)
            r3 = eval_pseudo(W, P, C, s) - (S * eval_pseudo(dG, P, C, s) - ivr(P + 1) * eval_pseudo(G, P, C, s))
            r4 = eval_pseudo(H, P, C, s) - (S * eval_pseudo(Q2, P, C, s) - ivr(P + 1) * eval_pseudo(Q1, P, C, s))
            zero_ok = all(sign_of(r) in (Sign.ZERO, Sign.INDETERMINATE) for r in (r1, r2, r3, r4))
            hstep = Fraction(1, 10**6)
            num = (mid(psi(P, None, s + hstep)) - mid(psi(P, None, s - hstep))) / (2 * mpmath.mpf(hstep.numerator) / hstep.denominator)
            closed = mid(psi_prime_via_P(P, None, s))
            term = mid(psi_prime(P, None, s))
            rel = abs(num - closed) / max(abs(closed), mpmath.mpf(10) ** -30)
            psi_ok = rel <= mpmath.mpf("1e-6") and abs(term - closed) <= abs(closed) * mpmath.mpf(10) ** -40 + mpmath.mpf(10) ** -60
            sign_ok = sign_of(psi_prime_via_P(P, None, s)) is -sign_of(eval_pseudo(FP, P, C, s))
            ok &= zero_ok and psi_ok and sign_ok
            rows.append({"p": P, "s": s, "identities hold": zero_ok, "psi' relative error": rel, "sign(psi') = -sign(P)": sign_ok})
    return LemmaResult("chain-consistency", _status(ok), p="random", witnesses={"triples": rows}, elapsed_ms=_ms(t0))


SUITE_BOUNDARY = "boundary"
SUITE_PATTERNS = "patterns"
SUITE_ENDPOINT = "endpoint"


def exact_route_available(p) -> bool:
    """True when every exact sign-pattern route at p clears to degree <= MAX_CLEARED_DEGREE."""
    P = rational_p(p)
    return all(_cleared_degree(pseudo_for(t), P) <= MAX_CLEARED_DEGREE for t in (Tag.G_FN, Tag.W_FN, Tag.Q_FN, Tag.Q_PRIME))


def run_p_suite(name: str, p, ctx: PrecisionContext | int | None = None, *, seed: int = 0) -> list[LemmaResult]:
    """All per-p checks of one suite."""
    from .constants import verify_c_bounds

    P = rational_p(p)
    if name == SUITE_BOUNDARY:
        return verify_boundary(P, ctx)
    if name == SUITE_ENDPOINT:
        return [verify_c_bounds(P, ctx), *verify_endpoint_lemmas(P, ctx), verify_tek11(P, ctx)]
    if name == SUITE_PATTERNS:
        out = []
        if exact_route_available(P):
            out = [verify_sign_pattern(t, P, None, ctx) for t in (Tag.G_FN, Tag.W_FN, Tag.Q_FN, Tag.Q_PRIME)]
        out.append(verify_sign_pattern(Tag.H_PRIME, P, None, ctx))
        return out
    if name == "main":
        return [verify_main_inequality(P, 20_000, seed), verify_h_nonneg(P, None, ctx)]
    raise ValueError(f"unknown suite {name!r}")
