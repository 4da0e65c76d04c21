"""Scalar constants with certified enclosures.

Every exponent ``p`` is handled as an exact rational: decimal floats go through
their shortest string form (3.01 -> 301/100) and binary mpf values are converted
exactly.  Rational quantities (c_L, c_U, s_A, ...) are then exact Fractions and
the transcendental ones are :mod:`mpmath.iv` intervals.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import iv
from mpmath.libmp import to_rational

from .intervals import (
    Interval,
    PrecisionContext,
    ctx_or_default,
    ivr,
    lower,
    radius,
    sign_of,
    upper,
)
from .exact import Sign
from .results import LemmaResult, Status


def rational_p(p) -> Fraction:
    """Exact rational value of an exponent given as int, Fraction, str, float or mpf."""
    if isinstance(p, Fraction):
        return p
    if isinstance(p, int):
        return Fraction(p)
    if isinstance(p, float):
        return Fraction(repr(p))
    if isinstance(p, str):
        return Fraction(p)
    if isinstance(p, mpmath.mpf):
        m, e = to_rational(p._mpf_)
        return Fraction(int(m), int(e))
    raise TypeError(f"cannot interpret {p!r} as an exponent")


def iv_pow(base: Fraction, expo: Fraction) -> Interval:
    """Enclosure of base**expo for rational base > 0; exact when expo is an integer."""
    if expo.denominator == 1:
        return ivr(base ** int(expo))
    return ivr(base) ** ivr(expo)


def critical_c(p, ctx: PrecisionContext | int | None = None) -> Interval:
    """Enclosure of 2 ln2 / ((p-2) ln3 + 2 ln2)."""
    P = rational_p(p)
    if P < 2:
        raise ValueError("critical exponent needs p >= 2")
    with ctx_or_default(ctx).active():
        if P == 2:
            return iv.mpf(1)
        l2, l3 = iv.log(2), iv.log(3)
        return 2 * l2 / (ivr(P - 2) * l3 + 2 * l2)


def beta(n: int, p, ctx: PrecisionContext | int | None = None) -> Interval:
    """Largest conjectured power in the n-function inequality; 2/p at n = 2."""
    if n < 2:
        raise ValueError("beta needs n >= 2")
    P = rational_p(p)
    if P < 2:
        raise ValueError("beta needs p >= 2")
    with ctx_or_default(ctx).active():
        if n == 2:
            return ivr(Fraction(2) / P)
        ln_n, ln_n1, ln_n2 = iv.log(n), iv.log(n - 1), iv.log(n - 2)
        half = ivr(P / 2)
        return (ln_n1 - ln_n2) / ((half - 1) * ln_n + ln_n1 - half * ln_n2)


def cfl_r(n: int, p) -> Fraction:
    P = rational_p(p)
    return Fraction(2 * n) / (2 * n + (P - 2) * (2 * n - 1))


def nice_identity_residual(p, n: int = 3, ctx: PrecisionContext | int | None = None) -> Interval:
    """Enclosure of (n-1) * (n/2 * C(n,2)^(-p/2))^beta(n,p) - 1."""
    P = rational_p(p)
    with ctx_or_default(ctx).active():
        b = beta(n, P)
        pairs = math.comb(n, 2)
        inner = ivr(Fraction(n, 2)) * iv_pow(Fraction(pairs), -P / 2)
        return (n - 1) * inner**b - 1


def nice_identity_n3(p, ctx: PrecisionContext | int | None = None) -> Interval:
    return nice_identity_residual(p, 3, ctx)


@dataclass(frozen=True)
class ConstantSet:
    p: Fraction
    p_prime: Fraction
    c_of_p: Interval
    c_L: Fraction
    c_U: Fraction
    c_plus: Fraction
    s_A: Fraction
    r: Fraction
    x_sA: Interval
    x_r: Interval
    bits: int

    @classmethod
    def at(cls, p, ctx: PrecisionContext | int | None = None) -> "ConstantSet":
        ctx = ctx_or_default(ctx)
        P = rational_p(p)
        if P <= 2:
            raise ValueError("constant set needs p > 2")
        with ctx.active():
            s_A = (P - 1) / (P + 1)
            r = P / (P + 1)
            return cls(
                p=P,
                p_prime=P / (P - 1),
                c_of_p=critical_c(P),
                c_L=Fraction(5) / (4 * P - 3),
                c_U=Fraction(4) / (3 * P - 2),
                c_plus=Fraction(24) / (19 * P - 14),
                s_A=s_A,
                r=r,
                x_sA=iv_pow(s_A, P),
                x_r=iv_pow(r, P),
                bits=ctx.bits,
            )

    def beta_np(self, n: int) -> Interval:
        return beta(n, self.p, self.bits)

    def cfl_r(self, n: int) -> Fraction:
        return cfl_r(n, self.p)

    def window_checks(self) -> dict[str, bool]:
        """Uniform windows for s_A^p and r^p used by the endpoint reductions."""
        with PrecisionContext(self.bits).active():
            inv_e = iv.exp(-1)
            return {
                "x_sA > 1/8": lower(self.x_sA) > Fraction(1, 8),
                "x_sA < 17/125": upper(self.x_sA) < Fraction(17, 125),
                "x_r > 1/e": sign_of(self.x_r - inv_e) is Sign.PLUS,
                "x_r <= 27/64": upper(self.x_r) <= Fraction(27, 64),
                "x_r > 9/25": lower(self.x_r) > Fraction(9, 25),
            }


def _lt(a, b) -> bool:
    """Certified a < b for Fractions or intervals."""
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a < b
    return sign_of(ivr(b) - ivr(a)) is Sign.PLUS


def log2_3_bracket() -> tuple[Fraction, Fraction]:
    """Rational bracket 19/12 < log2(3) < 8/5 from 3^12 > 2^19 and 3^5 < 2^8."""
    assert 3**12 > 2**19 and 3**5 < 2**8
    return Fraction(19, 12), Fraction(8, 5)


def verify_c_bounds(p, ctx: PrecisionContext | int | None = None) -> LemmaResult:
    """Certify 5/(4p-3) < c(p) < 4/(3p-2), 1/(p-1) < c(p) < 2/p and c(p) < 24/(19p-14)."""
    P = rational_p(p)
    if P <= 3:
        raise ValueError("c bounds are claimed for p > 3")
    ctx = ctx_or_default(ctx)
    t0 = time.perf_counter()
    with ctx.active():
        cs = ConstantSet.at(P, ctx)
        c = cs.c_of_p
        checks = {
            "c_L < c": _lt(cs.c_L, c),
            "c < c_U": _lt(c, cs.c_U),
            "1/(p-1) < c": _lt(1 / (P - 1), c),
            "c < 2/p": _lt(c, 2 / P),
            "c < c_plus": _lt(c, cs.c_plus),
        }
        # rational route: c = 2/(2 + (p-2)a) with a = log2(3) inside (19/12, 8/5)
        a_lo, a_hi = log2_3_bracket()
        c_hi_rat = Fraction(2) / (2 + (P - 2) * a_lo)
        c_lo_rat = Fraction(2) / (2 + (P - 2) * a_hi)
        checks["rational c_plus bound"] = c_hi_rat == cs.c_plus
        checks["rational c_L bound"] = c_lo_rat >= cs.c_L
    status = Status.PASS if all(checks.values()) else Status.FAIL
    margins = {
        "c - c_L": ivr(c) - ivr(cs.c_L),
        "c_U - c": ivr(cs.c_U) - ivr(c),
        "c_plus - c": ivr(cs.c_plus) - ivr(c),
    }
    return LemmaResult(
        "c-bounds",
        status,
        p=P,
        witnesses={"checks": checks, "c": c, **margins},
        elapsed_ms=(time.perf_counter() - t0) * 1000,
        note=f"{ctx.bits} bits; c radius {mpmath.nstr(radius(c), 3)}",
    )
