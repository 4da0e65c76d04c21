"""Exact rational polynomial arithmetic, Sturm chains and positivity certificates.

Everything here works over :class:`fractions.Fraction`, so every answer is exact.
Values are immutable; all functions are pure.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence, Union

BigRational = Fraction
RationalLike = Union[int, Fraction, str, float]

__all__ = [
    "BigRational",
    "RatPoly",
    "Sign",
    "SignSequence",
    "SturmChain",
    "PositivityCertificate",
    "as_rational",
    "poly_eval",
    "taylor_shift",
    "positivity_certificate",
    "sturm_chain",
    "count_roots",
    "sign_changes",
    "isolate_roots",
    "poly_gcd",
    "squarefree_part",
    "EndpointRootError",
    "IndeterminateSignError",
]


class EndpointRootError(ValueError):
    """An interval endpoint stayed on a root after every allowed perturbation."""


class IndeterminateSignError(ValueError):
    def __init__(self, index: int):
        super().__init__(f"sign sequence entry {index} is indeterminate")
        self.index = index


def as_rational(x: RationalLike) -> Fraction:
    """Convert ``x`` to an exact Fraction (floats are converted exactly, not rounded)."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str, float)):
        return Fraction(x)
    # numpy scalars, mpmath mpf, ...
    return Fraction(float(x))


class RatPoly:
    """Dense univariate polynomial with rational coefficients; ``coeffs[i]`` multiplies x**i."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[RationalLike] = ()):
        cs = [as_rational(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("RatPoly is immutable")

    @classmethod
    def x(cls) -> "RatPoly":
        return cls([0, 1])

    @classmethod
    def constant(cls, c: RationalLike) -> "RatPoly":
        return cls([c])

    @classmethod
    def from_descending(cls, coeffs: Sequence[RationalLike]) -> "RatPoly":
        """Build from a highest-degree-first list, the way coefficients are usually printed."""
        return cls(list(reversed(list(coeffs))))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def descending(self) -> list[Fraction]:
        return list(reversed(self.coeffs))

    def __call__(self, x: RationalLike) -> Fraction:
        return poly_eval(self, as_rational(x))

    def __eq__(self, other) -> bool:
        if isinstance(other, RatPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == RatPoly([other]).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        if not self.coeffs:
            return "RatPoly(0)"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            terms.append(f"{c}" if i == 0 else f"{c}*x^{i}")
        return "RatPoly(" + " + ".join(terms) + ")"

    def _coerce(self, other) -> "RatPoly":
        if isinstance(other, RatPoly):
            return other
        return RatPoly([other])

    def __add__(self, other) -> "RatPoly":
        o = self._coerce(other)
        n = max(len(self.coeffs), len(o.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = o.coeffs + (Fraction(0),) * (n - len(o.coeffs))
        return RatPoly([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self) -> "RatPoly":
        return RatPoly([-c for c in self.coeffs])

    def __sub__(self, other) -> "RatPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "RatPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "RatPoly":
        if not isinstance(other, RatPoly):
            k = as_rational(other)
            return RatPoly([c * k for c in self.coeffs])
        if self.is_zero() or other.is_zero():
            return RatPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return RatPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "RatPoly":
        if k < 0:
            raise ValueError("negative power")
        out = RatPoly([1])
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __divmod__(self, other: "RatPoly") -> tuple["RatPoly", "RatPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dd = other.degree
        lc = other.leading
        if len(rem) - 1 < dd:
            return RatPoly(), self
        quo = [Fraction(0)] * (len(rem) - dd)
        for k in range(len(rem) - 1 - dd, -1, -1):
            q = rem[k + dd] / lc
            quo[k] = q
            if q:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= q * b
        return RatPoly(quo), RatPoly(rem[:dd])

    def __mod__(self, other: "RatPoly") -> "RatPoly":
        return divmod(self, other)[1]

    def __floordiv__(self, other: "RatPoly") -> "RatPoly":
        return divmod(self, other)[0]

    def derivative(self) -> "RatPoly":
        return RatPoly([i * c for i, c in enumerate(self.coeffs)][1:])

    def monic(self) -> "RatPoly":
        if self.is_zero():
            return self
        return self * (1 / self.leading)

    def primitive(self) -> "RatPoly":
        """Positive rational multiple with coprime integer coefficients.

        The scaling factor is positive, so signs (and Sturm counts) are unchanged.
        """
        if self.is_zero():
            return self
        den = 1
        for c in self.coeffs:
            den = lcm(den, c.denominator)
        ints = [c.numerator * (den // c.denominator) for c in self.coeffs]
        g = 0
        for v in ints:
            g = gcd(g, v)
        return RatPoly([Fraction(v // g) for v in ints])

    def integer_coeffs(self) -> list[int]:
        """Ascending integer coefficients; raises if any coefficient is non-integral."""
        out = []
        for c in self.coeffs:
            if c.denominator != 1:
                raise ValueError(f"coefficient {c} is not an integer")
            out.append(c.numerator)
        return out

    def compose_power(self, k: int) -> "RatPoly":
        """P(x**k)."""
        out = [Fraction(0)] * (k * self.degree + 1) if self.coeffs else []
        for i, c in enumerate(self.coeffs):
            out[i * k] = c
        return RatPoly(out)


def poly_eval(P: RatPoly, x: RationalLike) -> Fraction:
    """Exact value of ``P`` at ``x`` by Horner's rule."""
    x = as_rational(x)
    acc = Fraction(0)
    for c in reversed(P.coeffs):
        acc = acc * x + c
    return acc


def taylor_shift(P: RatPoly, a: RationalLike) -> RatPoly:
    """Coefficients of ``Q(t) = P(a + t)`` (repeated synthetic division)."""
    a = as_rational(a)
    c = list(P.coeffs)
    n = len(c)
    for i in range(n - 1):
        for k in range(n - 2, i - 1, -1):
            c[k] += a * c[k + 1]
    return RatPoly(c)


@dataclass(frozen=True)
class PositivityCertificate:
    """Outcome of the Taylor-shift test ``P(a + t)`` has only nonnegative coefficients.

    ``holds`` means P > 0 on (a, inf).  A failed certificate says nothing about
    negativity; ``first_negative`` names the offending coefficient index.
    """

    poly: RatPoly
    anchor: Fraction
    shifted: RatPoly
    holds: bool
    first_negative: int | None = None

    def __bool__(self) -> bool:
        return self.holds


def positivity_certificate(P: RatPoly, a: RationalLike) -> PositivityCertificate:
    a = as_rational(a)
    shifted = taylor_shift(P, a)
    neg = next((i for i, c in enumerate(shifted.coeffs) if c < 0), None)
    holds = neg is None and any(c > 0 for c in shifted.coeffs)
    return PositivityCertificate(P, a, shifted, holds, neg)


class Sign(enum.Enum):
    PLUS = "+"
    MINUS = "-"
    ZERO = "0"
    INDETERMINATE = "?"

    @classmethod
    def of(cls, x) -> "Sign":
        if x > 0:
            return cls.PLUS
        if x < 0:
            return cls.MINUS
        return cls.ZERO

    def __neg__(self) -> "Sign":
        return {Sign.PLUS: Sign.MINUS, Sign.MINUS: Sign.PLUS}.get(self, self)


@dataclass(frozen=True)
class SignSequence:
    entries: tuple[Sign, ...]
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        if not self.entries:
            raise ValueError("sign sequence must have at least one entry")
        if self.labels is not None and len(self.labels) != len(self.entries):
            raise ValueError("labels must match entries")

    @classmethod
    def parse(cls, text: str, labels: Sequence[str] | None = None) -> "SignSequence":
        """Parse strings like ``"--++"`` or ``"(-,-,+,+)"``."""
        chars = [ch for ch in text if ch in "+-0?"]
        return cls(tuple(Sign(ch) for ch in chars), tuple(labels) if labels else None)

    def __str__(self) -> str:
        return "(" + ",".join(e.value for e in self.entries) + ")"

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def determinate(self) -> bool:
        return Sign.INDETERMINATE not in self.entries


def sign_changes(seq: SignSequence | Sequence[Sign]) -> int:
    """Count strict sign alternations, skipping ZERO entries."""
    entries = seq.entries if isinstance(seq, SignSequence) else tuple(seq)
    prev = None
    changes = 0
    for i, e in enumerate(entries):
        if e is Sign.INDETERMINATE:
            raise IndeterminateSignError(i)
        if e is Sign.ZERO:
            continue
        if prev is not None and e is not prev:
            changes += 1
        prev = e
    return changes


@dataclass(frozen=True)
class SturmChain:
    source: RatPoly
    polys: tuple[RatPoly, ...]

    def variations(self, x: Fraction | None, *, at: str = "point") -> int:
        """Sign variations of the chain at ``x``; ``x=None`` with at='+inf'/'-inf' uses limits."""
        if x is None:
            if at == "+inf":
                vals = [P.leading for P in self.polys]
            elif at == "-inf":
                vals = [P.leading * (-1 if P.degree % 2 else 1) for P in self.polys]
            else:
                raise ValueError(at)
        else:
            vals = [poly_eval(P, x) for P in self.polys]
        return sign_changes([Sign.of(v) for v in vals])

    @property
    def degrees(self) -> list[int]:
        return [P.degree for P in self.polys]


def sturm_chain(P: RatPoly, *, normalize: bool = False) -> SturmChain:
    """P, P', then negated Euclidean remainders until the remainder vanishes.

    With ``normalize=True`` each member after P is rescaled by a positive
    constant to coprime integers; that keeps coefficients small on high degrees
    and leaves every sign count intact.
    """
    if P.is_zero():
        raise ValueError("Sturm chain of the zero polynomial is undefined")
    chain = [P]
    d = P.derivative()
    while not d.is_zero():
        chain.append(d.primitive() if normalize else d)
        d = -(chain[-2] % chain[-1])
    return SturmChain(P, tuple(chain))


def _perturbed(chain: SturmChain, x: Fraction, direction: int) -> Fraction:
    P = chain.source
    if poly_eval(P, x) != 0:
        return x
    for k in range(20, 65):
        y = x + direction * Fraction(1, 2**k)
        if poly_eval(P, y) != 0:
            return y
    raise EndpointRootError(f"endpoint {x} is a root after all perturbations")


def count_roots(
    chain: SturmChain | RatPoly,
    lo: RationalLike | None,
    hi: RationalLike | None,
) -> int:
    """Number of distinct real roots in ``(lo, hi]`` (``None`` means -inf / +inf).

    An endpoint that is itself a root is pushed outward by 2**-k, k = 20..64.
    """
    if isinstance(chain, RatPoly):
        chain = sturm_chain(chain, normalize=True)
    if lo is not None and hi is not None and as_rational(lo) >= as_rational(hi):
        raise ValueError("need lo < hi")
    if lo is None:
        v_lo = chain.variations(None, at="-inf")
    else:
        v_lo = chain.variations(_perturbed(chain, as_rational(lo), -1))
    if hi is None:
        v_hi = chain.variations(None, at="+inf")
    else:
        v_hi = chain.variations(_perturbed(chain, as_rational(hi), +1))
    return v_lo - v_hi


def poly_gcd(A: RatPoly, B: RatPoly) -> RatPoly:
    while not B.is_zero():
        A, B = B, A % B
    return A.monic()


def squarefree_part(P: RatPoly) -> RatPoly:
    if P.degree <= 0:
        return P
    g = poly_gcd(P, P.derivative())
    return (P // g).primitive() if g.degree > 0 else P.primitive()


def _cauchy_bound(P: RatPoly) -> Fraction:
    lc = abs(P.leading)
    return 1 + max((abs(c) / lc for c in P.coeffs[:-1]), default=Fraction(0))


def isolate_roots(
    P: RatPoly,
    lo: RationalLike | None,
    hi: RationalLike | None,
    width: RationalLike,
) -> list[tuple[Fraction, Fraction]]:
    """Disjoint intervals ``(a, b)`` each holding exactly one distinct root of P in (lo, hi).

    P is reduced to its squarefree part first; returned intervals have rational,
    non-root endpoints and length <= width.
    """
    width = as_rational(width)
    if width <= 0:
        raise ValueError("width must be positive")
    if P.is_zero():
        raise ValueError("zero polynomial has no isolated roots")
    S = squarefree_part(P)
    if S.degree <= 0:
        return []
    chain = sturm_chain(S, normalize=True)
    bound = _cauchy_bound(S)
    a = as_rational(lo) if lo is not None else -bound
    b = as_rational(hi) if hi is not None else bound
    a = max(a, -bound - 1)
    b = min(b, bound + 1)

    def nudge(x: Fraction, span: Fraction) -> Fraction:
        # move a split point off an exact root, staying well inside the span
        k = 8
        y = x
        while poly_eval(S, y) == 0:
            y = x + span / 2**k
            k += 1
        return y

    # endpoints lying on roots are excluded: roots in the open interval only
    if poly_eval(S, a) == 0:
        a = _perturbed(chain, a, +1)
        if a >= b:
            return []
    if poly_eval(S, b) == 0:
        b = _perturbed(chain, b, -1)

    out: list[tuple[Fraction, Fraction]] = []
    stack = [(a, b, chain.variations(a) - chain.variations(b))]
    while stack:
        x, y, n = stack.pop()
        if n == 0:
            continue
        if n == 1 and y - x <= width:
            out.append((x, y))
            continue
        m = nudge((x + y) / 2, y - x)
        vm = chain.variations(m)
        left = chain.variations(x) - vm
        stack.append((m, y, n - left))
        stack.append((x, m, left))
    out.sort()
    return out
