"""Finite measure-space models: the private/common family and exact spot checks.

Functions live on k atoms with positive rational weights.  For integer p every
norm power and the tuple expansion of the p-th power of the sum are exact
rationals; the almost-orthogonality coefficients alpha_jk are exact when they are
0 (disjoint supports) or 1 (proportional functions) and enclosures otherwise.
"""

from __future__ import annotations

import itertools
import math
import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath
from mpmath import iv

from .constants import rational_p
from .exact import Sign
from .intervals import Interval, PrecisionContext, ctx_or_default, ivr, lower, sign_of, upper
from .results import LemmaResult, Status

Number = Fraction | Interval


def _pow(x: Fraction, e: Fraction) -> Number:
    """x**e, exact whenever that is rational by construction."""
    if x == 0:
        return Fraction(0) if e > 0 else Fraction(1)
    if x == 1 or e == 0:
        return Fraction(1)
    if e.denominator == 1:
        return x ** int(e)
    return ivr(x) ** ivr(e)


def _add(a: Number, b: Number) -> Number:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a + b
    return ivr(a) + ivr(b)


def _mul(a: Number, b: Number) -> Number:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a * b
    return ivr(a) * ivr(b)


def _sign(x: Number) -> Sign:
    return Sign.of(x) if isinstance(x, Fraction) else sign_of(x)


@dataclass(frozen=True)
class DiscreteInstance:
    """n nonnegative functions on k weighted atoms; values[j][a] is f_j at atom a."""

    weights: tuple[Fraction, ...]
    values: tuple[tuple[Fraction, ...], ...]
    p: Fraction

    def __post_init__(self):
        if not self.weights:
            raise ValueError("need at least one atom")
        if any(w <= 0 for w in self.weights):
            raise ValueError("atom weights must be positive")
        for row in self.values:
            if len(row) != len(self.weights):
                raise ValueError("each function needs one value per atom")
            if any(v < 0 for v in row):
                raise ValueError("function values must be nonnegative")

    @classmethod
    def make(cls, weights: Sequence, values: Sequence[Sequence], p) -> "DiscreteInstance":
        return cls(
            tuple(Fraction(w) for w in weights),
            tuple(tuple(Fraction(v) for v in row) for row in values),
            rational_p(p),
        )

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def atoms(self) -> int:
        return len(self.weights)

    def scaled(self, lam) -> "DiscreteInstance":
        lam = Fraction(lam)
        return DiscreteInstance(tuple(w * lam for w in self.weights), self.values, self.p)

    def integral(self, fn_values: Sequence[Fraction], e: Fraction) -> Number:
        """Sum over atoms of weight * value**e."""
        total: Number = Fraction(0)
        for w, v in zip(self.weights, fn_values):
            total = _add(total, _mul(w, _pow(v, e)))
        return total

    def norm_pow(self, j: int) -> Number:
        """||f_j||_p^p."""
        return self.integral(self.values[j], self.p)

    def sum_norm_pow(self) -> Number:
        """||sum_j f_j||_p^p."""
        s = [sum(col, Fraction(0)) for col in zip(*self.values)] if self.values else [Fraction(0)] * self.atoms
        return self.integral(s, self.p)

    def pair_integral(self, j: int, k: int) -> Number:
        """||f_j f_k||_{p/2}^{p/2}."""
        prod = [a * b for a, b in zip(self.values[j], self.values[k])]
        return self.integral(prod, self.p / 2)

    def disjoint(self, j: int, k: int) -> bool:
        return all(a * b == 0 for a, b in zip(self.values[j], self.values[k]))

    def proportional(self, j: int, k: int) -> bool:
        a, b = self.values[j], self.values[k]
        if not any(a) or not any(b):
            return False
        ratio = None
        for x, y in zip(a, b):
            if (x == 0) != (y == 0):
                return False
            if x:
                r = x / y
                if ratio is None:
                    ratio = r
                elif r != ratio:
                    return False
        return True

    def to_text(self) -> str:
        fmt = lambda x: f"{x.numerator}/{x.denominator}"  # noqa: E731
        lines = [f"atoms {self.atoms}", " ".join(fmt(w) for w in self.weights)]
        lines += [" ".join(fmt(v) for v in row) for row in self.values]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, p) -> "DiscreteInstance":
        rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
        if not rows or rows[0][0] != "atoms" or len(rows[0]) != 2:
            raise ValueError("first line must be 'atoms k'")
        k = int(rows[0][1])
        if len(rows) < 2 or len(rows[1]) != k:
            raise ValueError(f"second line must hold {k} weights")
        values = rows[2:]
        for r in values:
            if len(r) != k:
                raise ValueError(f"every function line must hold {k} values")
        return cls.make(rows[1], values, p)


@dataclass(frozen=True)
class AlphaMatrix:
    """alpha_jk = sqrt(||f_j f_k||_{p/2} / (||f_j||_p ||f_k||_p)), 0 when a norm vanishes."""

    entries: tuple[tuple[Number, ...], ...]

    @classmethod
    def of(cls, inst: DiscreteInstance, ctx: PrecisionContext | int | None = None) -> "AlphaMatrix":
        with ctx_or_default(ctx).active():
            rows = []
            for j in range(inst.n):
                row = []
                for k in range(inst.n):
                    row.append(_alpha_pow(inst, j, k, Fraction(1)))
                rows.append(tuple(row))
            return cls(tuple(rows))

    def power(self, e) -> "AlphaMatrix":
        e = Fraction(e)
        return AlphaMatrix(tuple(tuple(x if isinstance(x, Fraction) and x in (0, 1) else ivr(x) ** ivr(e) for x in row) for row in self.entries))

    def is_symmetric(self) -> bool:
        n = len(self.entries)
        for j in range(n):
            for k in range(j + 1, n):
                a, b = self.entries[j][k], self.entries[k][j]
                if isinstance(a, Fraction) and isinstance(b, Fraction):
                    if a != b:
                        return False
                elif not (lower(ivr(a)) <= upper(ivr(b)) and lower(ivr(b)) <= upper(ivr(a))):
                    return False
        return True

    def in_unit_interval(self) -> bool:
        return all(lower(ivr(x)) >= 0 and upper(ivr(x)) <= 1 + Fraction(1, 10**30) for row in self.entries for x in row)


def _alpha_pow(inst: DiscreteInstance, j: int, k: int, e: Fraction) -> Number:
    """alpha_jk ** e, exact for disjoint or proportional pairs."""
    Aj, Ak = inst.norm_pow(j), inst.norm_pow(k)
    if _sign(Aj) is Sign.ZERO or _sign(Ak) is Sign.ZERO or inst.disjoint(j, k):
        return Fraction(0)
    if j == k or inst.proportional(j, k):
        return Fraction(1)
    N = inst.pair_integral(j, k)
    # alpha^2 = (N^2 / (A_j A_k))^(1/p)
    ratio = ivr(N) ** 2 / (ivr(Aj) * ivr(Ak))
    return ratio ** (ivr(e) / (2 * ivr(inst.p)))


def build_private_common(n: int, p) -> DiscreteInstance:
    """n indicator functions, each on its own private atom and on one common atom."""
    if n < 3:
        raise ValueError("the private/common family needs n >= 3")
    values = []
    for j in range(n):
        row = [Fraction(0)] * (n + 1)
        row[j] = Fraction(1)
        row[n] = Fraction(1)
        values.append(tuple(row))
    return DiscreteInstance(tuple([Fraction(1)] * (n + 1)), tuple(values), rational_p(p))


def max_admissible_c(n: int, p, ctx: PrecisionContext | int | None = None) -> Interval:
    """Largest c for which the private/common instance of size n satisfies the c-variant bound."""
    if n < 3:
        raise ValueError("need n >= 3")
    P = rational_p(p)
    if P < 2:
        raise ValueError("need p >= 2")
    with ctx_or_default(ctx).active():
        if P == 2:
            return iv.mpf(2)
        inner = ((1 + ivr(Fraction(n)) ** ivr(P - 1)) / 2) ** ivr(1 / (P - 1)) - 1
        return ivr(P) / iv.log(2) * iv.log((n - 1) / inner)


def family_sides(n: int, p, c, ctx: PrecisionContext | int | None = None) -> tuple[Interval, Interval]:
    """(n + n^p, (1 + (n-1) 2^(-c/p))^(p-1) * 2n) for the private/common family."""
    P = rational_p(p)
    with ctx_or_default(ctx).active():
        N = ivr(Fraction(n))
        lhs = N + N ** ivr(P)
        C = ivr(c) if not isinstance(c, float) else ivr(Fraction(repr(c)))
        rhs = (1 + (N - 1) * 2 ** (-C / ivr(P))) ** ivr(P - 1) * 2 * N
        return lhs, rhs


def _violates(n: int, p, c, ctx) -> bool:
    lhs, rhs = family_sides(n, p, c, ctx)
    return mpmath.mpf(lhs._mpi_[0]) > mpmath.mpf(rhs._mpi_[1])


@dataclass(frozen=True)
class ViolationReport:
    p: Fraction
    c: Fraction
    n: int | None
    lhs: Interval | None
    rhs: Interval | None
    scanned_up_to: int
    neighbors_checked: bool


def find_violation(p, c, n_max: int = 10**6, ctx: PrecisionContext | int | None = None) -> ViolationReport:
    """Smallest n <= n_max where the private/common family violates the c-variant bound.

    Geometric scan (3, 6, 12, ...), bisection between the last passing and first
    violating size, then a re-test of the neighbour below.  Sizes below a small
    violator (<= 4096) are all re-tested directly.  A violation is reported only
    when the two enclosures separate.
    """
    P = rational_p(p)
    C = Fraction(repr(c)) if isinstance(c, float) else Fraction(c)
    if P < 2 or C <= 0 or n_max < 3:
        raise ValueError("need p >= 2, c > 0, n_max >= 3")
    ctx = ctx_or_default(ctx)
    last_ok, n = None, 3
    hit = None
    while n <= n_max:
        if _violates(n, P, C, ctx):
            hit = n
            break
        last_ok = n
        if n == n_max:
            break
        n = min(2 * n, n_max)
    if hit is None:
        return ViolationReport(P, C, None, None, None, n_max, False)
    lo, hi = (last_ok if last_ok is not None else 2), hit
    while hi - lo > 1:
        m = (lo + hi) // 2
        if _violates(m, P, C, ctx):
            hi = m
        else:
            lo = m
    if hi <= 4096:
        for m in range(3, hi):
            if _violates(m, P, C, ctx):
                hi = m
                break
    neighbors = hi == 3 or not _violates(hi - 1, P, C, ctx)
    lhs, rhs = family_sides(hi, P, C, ctx)
    return ViolationReport(P, C, hi, lhs, rhs, n_max, neighbors)


# ---------------------------------------------------------------------------
# the discrete overlap inequality in exact arithmetic


@dataclass(frozen=True)
class Slack:
    """RHS - LHS of a p-th power inequality; exact when ``value`` is a Fraction."""

    lhs: Number
    rhs: Number
    value: Number

    @property
    def sign(self) -> Sign:
        return _sign(self.value)

    @property
    def nonnegative(self) -> bool:
        return self.sign in (Sign.PLUS, Sign.ZERO)

    @property
    def lower(self) -> Fraction:
        return self.value if isinstance(self.value, Fraction) else lower(self.value)


def kappa(inst: DiscreteInstance, e, ctx: PrecisionContext | int | None = None) -> Number:
    """sup_j sum_k alpha_jk ** e (an enclosure of the max of the row sums)."""
    e = Fraction(e)
    with ctx_or_default(ctx).active():
        rows = []
        for j in range(inst.n):
            total: Number = Fraction(0)
            for k in range(inst.n):
                total = _add(total, _alpha_pow(inst, j, k, e))
            rows.append(total)
        if all(isinstance(r, Fraction) for r in rows):
            return max(rows)
        lo = max(lower(ivr(r)) for r in rows)
        hi = max(upper(ivr(r)) for r in rows)
        return iv.mpf([mpmath.mpf(lo.numerator) / lo.denominator, mpmath.mpf(hi.numerator) / hi.denominator])


def verify_carbery_discrete(inst: DiscreteInstance, c_exponent=None, ctx: PrecisionContext | int | None = None) -> Slack:
    """kappa_c^(p-1) sum_j ||f_j||_p^p - ||sum f_j||_p^p with kappa_c = sup_j sum_k alpha_jk^c.

    c_exponent defaults to p' = p/(p-1).  For integer p the norms are exact.
    """
    if inst.n == 0:
        raise ValueError("empty instance")
    P = inst.p
    c = P / (P - 1) if c_exponent is None else Fraction(c_exponent)
    ctx = ctx_or_default(ctx)
    with ctx.active():
        lhs = inst.sum_norm_pow()
        total: Number = Fraction(0)
        for j in range(inst.n):
            total = _add(total, inst.norm_pow(j))
        k = kappa(inst, c, ctx)
        if isinstance(k, Fraction) and (P - 1).denominator == 1:
            kp = k ** int(P - 1)
        else:
            kp = ivr(k) ** ivr(P - 1)
        rhs = _mul(kp, total)
        value = rhs - lhs if isinstance(rhs, Fraction) and isinstance(lhs, Fraction) else ivr(rhs) - ivr(lhs)
        return Slack(lhs, rhs, value)


def tuple_sum(inst: DiscreteInstance) -> Fraction:
    """Sum over all p-tuples of indices of the integral of f_{j_1} ... f_{j_p} (integer p)."""
    if inst.p.denominator != 1:
        raise ValueError("the tuple expansion needs an integer p")
    p = int(inst.p)
    total = Fraction(0)
    for tup in itertools.product(range(inst.n), repeat=p):
        for a, w in enumerate(inst.weights):
            prod = w
            for j in tup:
                prod *= inst.values[j][a]
                if not prod:
                    break
            total += prod
    return total


def verify_kernel_lemma(K: Sequence[Sequence], F: Sequence[Sequence], p: int, ctx: PrecisionContext | int | None = None) -> Slack:
    """kappa^(p-1) prod_s ||F_s||_p - sum over tuples of prod_{i<j} K^(2/(p-1)) prod_s F_s (counting measure)."""
    if p < 2 or int(p) != p:
        raise ValueError("the kernel lemma is checked for integer p >= 2")
    p = int(p)
    m = len(K)
    if any(len(row) != m for row in K):
        raise ValueError("K must be square")
    if len(F) != p or any(len(f) != m for f in F):
        raise ValueError(f"need p = {p} vectors of length {m}")
    Kq = [[Fraction(x) for x in row] for row in K]
    Fq = [[Fraction(x) for x in f] for f in F]
    e_pair = Fraction(2, p - 1)
    e_row = Fraction(p, p - 1)
    with ctx_or_default(ctx).active():
        Kp = [[_pow(x, e_pair) for x in row] for row in Kq]
        lhs: Number = Fraction(0)
        for tup in itertools.product(range(m), repeat=p):
            term: Number = Fraction(1)
            for s, x in enumerate(tup):
                term = _mul(term, Fq[s][x])
                if term == 0:
                    break
            if term == 0:
                continue
            for i in range(p):
                for j in range(i + 1, p):
                    term = _mul(term, Kp[tup[i]][tup[j]])
            lhs = _add(lhs, term)
        rows = []
        for x in range(m):
            r: Number = Fraction(0)
            for y in range(m):
                r = _add(r, _pow(Kq[x][y], e_row))
            rows.append(r)
        if all(isinstance(r, Fraction) for r in rows):
            kap: Number = max(rows)
        else:
            lo = max(lower(ivr(r)) for r in rows)
            hi = max(upper(ivr(r)) for r in rows)
            kap = iv.mpf([mpmath.mpf(lo.numerator) / lo.denominator, mpmath.mpf(hi.numerator) / hi.denominator])
        rhs: Number = kap ** (p - 1) if isinstance(kap, Fraction) else kap ** (p - 1)
        for f in Fq:
            # ||F||_p, exact when the p-th root is rational
            sp = sum((x**p for x in f), Fraction(0))
            rhs = _mul(rhs, _pow(sp, Fraction(1, p)))
        value = rhs - lhs if isinstance(rhs, Fraction) and isinstance(lhs, Fraction) else ivr(rhs) - ivr(lhs)
        return Slack(lhs, rhs, value)


def verify_l2_bound(inst: DiscreteInstance, ctx: PrecisionContext | int | None = None) -> Slack:
    """(sup_k sum_j alpha_jk^2) sum_j ||f_j||_2^2 - ||sum_j f_j||_2^2."""
    if inst.p != 2:
        raise ValueError("the L2 bound is stated for p = 2")
    return verify_carbery_discrete(inst, 2, ctx)


def random_instance(rng: random.Random, p, max_atoms: int = 8, max_functions: int = 6) -> DiscreteInstance:
    """Random rational instance; about a third of the values are zero so supports overlap partially."""
    k = rng.randint(1, max_atoms)
    n = rng.randint(1, max_functions)
    weights = [Fraction(rng.randint(1, 6), rng.randint(1, 4)) for _ in range(k)]
    values = [
        [Fraction(0) if rng.random() < 0.35 else Fraction(rng.randint(1, 9), rng.randint(1, 5)) for _ in range(k)]
        for _ in range(n)
    ]
    return DiscreteInstance.make(weights, values, p)


def theorem1_trials(p: int, trials: int, seed: int, ctx: PrecisionContext | int | None = None) -> LemmaResult:
    """Random instances at exponent p' ; every slack must be certified nonnegative."""
    t0 = time.perf_counter()
    rng = random.Random(seed)
    worst: Fraction | None = None
    worst_inst = None
    failures = []
    undecided = 0
    for i in range(trials):
        inst = random_instance(rng, p)
        s = verify_carbery_discrete(inst, None, ctx)
        lo = s.lower
        if worst is None or lo < worst:
            worst, worst_inst = lo, inst
        if s.sign is Sign.MINUS:
            failures.append(inst.to_text())
        elif s.sign is Sign.INDETERMINATE:
            undecided += 1
    status = Status.FAIL if failures else (Status.INDETERMINATE if undecided else Status.PASS)
    return LemmaResult(
        "theorem1",
        status,
        p=Fraction(p),
        c_regime="p'",
        witnesses={
            "trials": trials,
            "seed": seed,
            "min slack lower bound": worst,
            "worst instance": worst_inst.to_text() if worst_inst else None,
            "counterexamples": failures[:3],
            "undecided": undecided,
        },
        elapsed_ms=(time.perf_counter() - t0) * 1000,
    )


def kernel_trials(p: int, trials: int, seed: int, size: int = 4, ctx: PrecisionContext | int | None = None) -> LemmaResult:
    """Random symmetric nonnegative kernels and vectors; certified slack lower bounds."""
    t0 = time.perf_counter()
    rng = random.Random(seed)
    worst = None
    bad = 0
    for _ in range(trials):
        K = [[Fraction(0)] * size for _ in range(size)]
        for i in range(size):
            for j in range(i, size):
                K[i][j] = K[j][i] = Fraction(rng.randint(0, 8), rng.randint(1, 4))
        F = [[Fraction(rng.randint(0, 6), rng.randint(1, 3)) for _ in range(size)] for _ in range(p)]
        s = verify_kernel_lemma(K, F, p, ctx)
        lo = s.lower
        worst = lo if worst is None or lo < worst else worst
        bad += s.lower < -Fraction(1, 10**12)
    return LemmaResult(
        "kernel-lemma",
        Status.PASS if not bad else Status.FAIL,
        p=Fraction(p),
        witnesses={"trials": trials, "seed": seed, "min slack lower bound": worst, "violations": bad},
        elapsed_ms=(time.perf_counter() - t0) * 1000,
    )


def admissible_table(p, ns: Sequence[int], ctx: PrecisionContext | int | None = None) -> list[tuple[int, Interval]]:
    return [(n, max_admissible_c(n, p, ctx)) for n in ns]


def p_prime(p) -> Fraction:
    P = rational_p(p)
    return P / (P - 1)


def log_sizes(n_max: int, per_decade: int = 1) -> list[int]:
    out = {3}
    d = 1
    while 10**d <= n_max:
        out.add(10**d)
        d += 1
    return sorted(x for x in out if x <= n_max) if per_decade else [3]


__all__ = [
    "DiscreteInstance",
    "AlphaMatrix",
    "Slack",
    "ViolationReport",
    "build_private_common",
    "max_admissible_c",
    "family_sides",
    "find_violation",
    "kappa",
    "verify_carbery_discrete",
    "tuple_sum",
    "verify_kernel_lemma",
    "verify_l2_bound",
    "random_instance",
    "theorem1_trials",
    "kernel_trials",
    "admissible_table",
    "p_prime",
    "log_sizes",
    "math",
]
