"""Thin helpers around :mod:`mpmath.iv` for certified enclosures.

mpmath keeps its interval precision in a module-level context, so
:class:`PrecisionContext` is a context manager that sets and restores it.
"""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import iv
from mpmath.libmp import to_rational

from .exact import Sign

DEFAULT_BITS = 256

Interval = type(iv.mpf(1))


@dataclass(frozen=True)
class PrecisionContext:
    bits: int = DEFAULT_BITS

    def __post_init__(self):
        if self.bits < 64:
            raise ValueError("precision must be at least 64 bits")

    @contextmanager
    def active(self):
        old_iv, old_mp = iv.prec, mpmath.mp.prec
        iv.prec = self.bits
        mpmath.mp.prec = self.bits
        try:
            yield self
        finally:
            iv.prec, mpmath.mp.prec = old_iv, old_mp


def ctx_or_default(ctx: PrecisionContext | int | None) -> PrecisionContext:
    if ctx is None:
        return PrecisionContext()
    if isinstance(ctx, int):
        return PrecisionContext(ctx)
    return ctx


def ivr(x) -> Interval:
    """Tight enclosure of an exact number (int, Fraction, decimal string, float) or an interval."""
    if isinstance(x, Interval):
        return x
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return iv.mpf(x.numerator)
        return iv.mpf(x.numerator) / x.denominator
    if isinstance(x, str) and "/" in x:
        return ivr(Fraction(x))
    return iv.mpf(x)


def lower(x: Interval) -> Fraction:
    m, e = to_rational(x._mpi_[0])
    return Fraction(int(m), int(e))


def upper(x: Interval) -> Fraction:
    m, e = to_rational(x._mpi_[1])
    return Fraction(int(m), int(e))


def radius(x: Interval) -> mpmath.mpf:
    return (mpmath.mpf(x._mpi_[1]) - mpmath.mpf(x._mpi_[0])) / 2


def mid(x: Interval) -> mpmath.mpf:
    return (mpmath.mpf(x._mpi_[1]) + mpmath.mpf(x._mpi_[0])) / 2


def sign_of(x: Interval) -> Sign:
    lo, hi = x._mpi_
    if mpmath.mpf(lo) > 0:
        return Sign.PLUS
    if mpmath.mpf(hi) < 0:
        return Sign.MINUS
    if mpmath.mpf(lo) == 0 and mpmath.mpf(hi) == 0:
        return Sign.ZERO
    return Sign.INDETERMINATE


def contains(x: Interval, value) -> bool:
    v = mpmath.mpf(value) if not isinstance(value, Fraction) else value
    if isinstance(v, Fraction):
        return lower(x) <= v <= upper(x)
    return mpmath.mpf(x._mpi_[0]) <= v <= mpmath.mpf(x._mpi_[1])


def overlaps(x: Interval, y: Interval) -> bool:
    return not (mpmath.mpf(x._mpi_[1]) < mpmath.mpf(y._mpi_[0]) or mpmath.mpf(y._mpi_[1]) < mpmath.mpf(x._mpi_[0]))


def hull(*xs: Interval) -> Interval:
    lo = min(mpmath.mpf(x._mpi_[0]) for x in xs)
    hi = max(mpmath.mpf(x._mpi_[1]) for x in xs)
    return iv.mpf([lo, hi])


def as_pair(x: Interval) -> tuple[str, str]:
    """Endpoints as decimal strings with enough digits to round-trip (for reports)."""
    return (mpmath.nstr(mpmath.mpf(x._mpi_[0]), 40), mpmath.nstr(mpmath.mpf(x._mpi_[1]), 40))


def to_float(x: Interval) -> float:
    return float(mid(x))
