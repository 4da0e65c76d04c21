"""The one-variable functions of the three-function argument, as certified enclosures.

``h`` is the reduced form of the main inequality on the diagonal y = z with
t = y/x = 1/s; ``psi`` is the logarithm of the rescaled bracket of h'.  The
pseudopolynomials P, Q, g, W, H come from :mod:`triangle_cert.param_poly`.
"""

from __future__ import annotations

import enum
from fractions import Fraction
from functools import lru_cache

from mpmath import iv

from .constants import critical_c, rational_p
from .intervals import Interval, PrecisionContext, ctx_or_default, ivr
from .param_poly import (
    PseudoPoly,
    build_g,
    build_H,
    build_P,
    build_Q,
    build_W,
    differentiate,
    eval_pseudo,
)


class Tag(str, enum.Enum):
    H_FN = "H_FN"
    H_PRIME = "H_PRIME"
    PSI = "PSI"
    PSI_PRIME = "PSI_PRIME"
    P_FN = "P_FN"
    Q_FN = "Q_FN"
    Q_PRIME = "Q_PRIME"
    Q_PP = "Q_PP"
    G_FN = "G_FN"
    W_FN = "W_FN"
    BIG_H = "BIG_H"


@lru_cache(maxsize=None)
def pseudo_for(tag: Tag) -> PseudoPoly:
    if tag is Tag.P_FN:
        return build_P()
    if tag is Tag.Q_FN:
        return build_Q()
    if tag is Tag.Q_PRIME:
        return differentiate(build_Q())
    if tag is Tag.Q_PP:
        return differentiate(differentiate(build_Q()))
    if tag is Tag.G_FN:
        return build_g()
    if tag is Tag.W_FN:
        return build_W()
    if tag is Tag.BIG_H:
        return build_H()
    raise KeyError(tag)


def _s(s):
    if isinstance(s, Interval):
        return s
    if isinstance(s, float):
        return Fraction(repr(s))
    return Fraction(s)


def _pow(x: Interval, e: Fraction) -> Interval:
    return x ** int(e) if e.denominator == 1 else x ** ivr(e)


def _c(p: Fraction, c):
    return critical_c(p) if c is None else ivr(c)


def h(p, c, s, ctx: PrecisionContext | int | None = None) -> Interval:
    """h(s) = (2(2s+1)^(p/2)/(s^p+2))^c - ((s+2)^p/(s^p+2))^(1/(p-1)) + 1; c=None means c(p)."""
    P = rational_p(p)
    s = _s(s)
    with ctx_or_default(ctx).active():
        C = _c(P, c)
        if not isinstance(s, Interval):
            if s < 0:
                raise ValueError("h is defined for s >= 0")
            if s == 0:
                # 1^c - 2 + 1, exactly
                return iv.mpf(0)
        S = ivr(s)
        sp2 = _pow(S, P) + 2
        first = (2 * _pow(2 * S + 1, P / 2) / sp2) ** C
        second = (_pow(S + 2, P) / sp2) ** ivr(1 / (P - 1))
        return first - second + 1


def h_prime(p, c, s, ctx: PrecisionContext | int | None = None) -> Interval:
    P = rational_p(p)
    s = _s(s)
    with ctx_or_default(ctx).active():
        C = _c(P, c)
        S = ivr(s)
        sp = _pow(S, P)
        spm1 = _pow(S, P - 1)
        F = (2 * _pow(2 * S + 1, P / 2) / (sp + 2)) ** C
        G = (_pow(S + 2, P) / (sp + 2)) ** ivr(1 / (P - 1))
        bracket = -C * F * (sp + spm1 - 2) / (2 * S + 1) + 2 * G * (spm1 - 1) / (ivr(P - 1) * (S + 2))
        return ivr(P) / (sp + 2) * bracket


def h_second_at_one_closed(p, c=None, ctx: PrecisionContext | int | None = None) -> Interval:
    """p(p-2)(3 ln3 - 4 ln2) c / (9 ln2); equals h''(1) only when c = c(p)."""
    P = rational_p(p)
    with ctx_or_default(ctx).active():
        C = _c(P, c)
        l2, l3 = iv.log(2), iv.log(3)
        return ivr(P * (P - 2)) * (3 * l3 - 4 * l2) * C / (9 * l2)


def h_second_at_one_general(p, c=None, ctx: PrecisionContext | int | None = None) -> Interval:
    """(p/3)(2 - 2c(2p-1)/3), the value of h''(1) for any c with h'(1) = 0 structure."""
    P = rational_p(p)
    with ctx_or_default(ctx).active():
        C = _c(P, c)
        return ivr(P / 3) * (2 - 2 * C * ivr(2 * P - 1) / 3)


def bracket_multiplier(p, c, s, ctx: PrecisionContext | int | None = None) -> Interval:
    """(p-1)/2 (2s+1)/(s^p+s^(p-1)-2) ((s^p+2)/(2s+1)^(p/2))^c: negative on (0,1), positive on (1,inf)."""
    P = rational_p(p)
    s = _s(s)
    with ctx_or_default(ctx).active():
        C = _c(P, c)
        S = ivr(s)
        sp = _pow(S, P)
        return (
            ivr((P - 1) / 2)
            * (2 * S + 1)
            / (sp + _pow(S, P - 1) - 2)
            * ((sp + 2) / _pow(2 * S + 1, P / 2)) ** C
        )


def rescaled_bracket(p, c, s, ctx: PrecisionContext | int | None = None) -> Interval:
    """The bracket of h' times :func:`bracket_multiplier`; psi is log of its second term minus log of the first."""
    P = rational_p(p)
    s = _s(s)
    with ctx_or_default(ctx).active():
        C = _c(P, c)
        S = ivr(s)
        sp, spm1 = _pow(S, P), _pow(S, P - 1)
        head = 2 ** (C - 1) * C * ivr(P - 1)
        tail = (
            (S + 2) ** ivr(1 / (P - 1))
            * (spm1 - 1)
            * (2 * S + 1) ** (1 - ivr(P) * C / 2)
            * (sp + 2) ** (C - ivr(1 / (P - 1)))
            / (sp + spm1 - 2)
        )
        return tail - head


def h_bracket(p, c, s, ctx: PrecisionContext | int | None = None) -> Interval:
    """h'(s) without the positive factor p/(s^p+2)."""
    P = rational_p(p)
    s = _s(s)
    with ctx_or_default(ctx).active():
        C = _c(P, c)
        S = ivr(s)
        sp, spm1 = _pow(S, P), _pow(S, P - 1)
        F = (2 * _pow(2 * S + 1, P / 2) / (sp + 2)) ** C
        G = (_pow(S + 2, P) / (sp + 2)) ** ivr(1 / (P - 1))
        return -C * F * (sp + spm1 - 2) / (2 * S + 1) + 2 * G * (spm1 - 1) / (ivr(P - 1) * (S + 2))


def psi(p, c, s, ctx: PrecisionContext | int | None = None, *, limit: bool = True) -> Interval:
    """psi(s) from the log of the rescaled bracket of h'.

    At s = 1 the factor (s^(p-1)-1)/(s^p+s^(p-1)-2) is 0/0; with ``limit`` the
    removable value (p-1)/(2p-1) is used.  Near s = 1 the quotient is evaluated
    with 128 extra bits to absorb the cancellation.
    """
    P = rational_p(p)
    s = _s(s)
    ctx = ctx_or_default(ctx)
    if isinstance(s, Interval):
        if s.a <= 1 <= s.b:
            raise ValueError("psi: factor s^(p-1) - 1 vanishes inside the s interval")
    elif s == 1 and not limit:
        raise ValueError("psi: factor s^(p-1) - 1 = 0 at s = 1 (use limit mode)")
    elif s < 0:
        raise ValueError("psi is defined for s >= 0")
    with ctx.active():
        C = _c(P, c)
        head = -iv.log(2 ** (C - 1) * C * ivr(P - 1))
        if not isinstance(s, Interval) and s == 1:
            ratio = ivr((P - 1) / (2 * P - 1))
            return head + iv.log(ratio * 3 ** (C + 1 - ivr(P) * C / 2))
        near = not isinstance(s, Interval) and abs(s - 1) < Fraction(1, 20)
        with PrecisionContext(ctx.bits + (128 if near else 0)).active():
            S = ivr(s)
            spm1 = _pow(S, P - 1)
            ratio = (spm1 - 1) / (_pow(S, P) + spm1 - 2)
        S = ivr(s)
        return (
            head
            + iv.log(S + 2) / ivr(P - 1)
            + iv.log(ratio)
            + (1 - ivr(P) * C / 2) * iv.log(2 * S + 1)
            + (C - ivr(1 / (P - 1))) * iv.log(_pow(S, P) + 2)
        )


def psi_prime(p, c, s, ctx: PrecisionContext | int | None = None) -> Interval:
    """Term-by-term derivative of psi (five rational summands)."""
    P = rational_p(p)
    s = _s(s)
    with ctx_or_default(ctx).active():
        C = _c(P, c)
        S = ivr(s)
        sp, spm1, spm2 = _pow(S, P), _pow(S, P - 1), _pow(S, P - 2)
        p_ = ivr(P)
        return (
            1 / (ivr(P - 1) * (S + 2))
            + ivr(P - 1) * spm2 / (spm1 - 1)
            + (2 - p_ * C) / (1 + 2 * S)
            + (C * p_ - ivr(P / (P - 1))) * spm1 / (sp + 2)
            - (p_ * spm1 + ivr(P - 1) * spm2) / (sp + spm1 - 2)
        )


def psi_prime_denominator(p, s, ctx: PrecisionContext | int | None = None) -> Interval:
    """(p-1)(s+2)(2s+1)(s^(p-1)-1)(s^p+2)(s^p+s^(p-1)-2)."""
    P = rational_p(p)
    s = _s(s)
    with ctx_or_default(ctx).active():
        S = ivr(s)
        sp, spm1 = _pow(S, P), _pow(S, P - 1)
        return ivr(P - 1) * (S + 2) * (2 * S + 1) * (spm1 - 1) * (sp + 2) * (sp + spm1 - 2)


def psi_prime_via_P(p, c, s, ctx: PrecisionContext | int | None = None) -> Interval:
    P = rational_p(p)
    with ctx_or_default(ctx).active():
        C = _c(P, c)
        return -eval_pseudo(build_P(), P, C, _s(s)) / psi_prime_denominator(P, s)


def eval_named(tag: Tag | str, p, c, s, ctx: PrecisionContext | int | None = None) -> Interval:
    """Certified enclosure of a named function; c=None means c = c(p)."""
    tag = Tag(tag)
    if tag is Tag.H_FN:
        return h(p, c, s, ctx)
    if tag is Tag.H_PRIME:
        return h_prime(p, c, s, ctx)
    if tag is Tag.PSI:
        return psi(p, c, s, ctx)
    if tag is Tag.PSI_PRIME:
        return psi_prime(p, c, s, ctx)
    P = rational_p(p)
    with ctx_or_default(ctx).active():
        return eval_pseudo(pseudo_for(tag), P, _c(P, c), _s(s))
