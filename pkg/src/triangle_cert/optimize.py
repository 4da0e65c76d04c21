"""Constrained maximization on {sum a^p = 1, sum_{i<j} a_i a_j = b} and the n-function inequality.

Floating point throughout (numpy); the tolerance ladder is: constraints 1e-10,
slack assertions -1e-12, oracle agreement 1e-3.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .constants import beta as beta_iv
from .constants import critical_c, rational_p
from .discrete import DiscreteInstance
from .intervals import PrecisionContext, to_float
from .results import LemmaResult, Status

CONSTRAINT_TOL = 1e-10
SLACK_TOL = 1e-12


def beta_float(n: int, p: float) -> float:
    """beta(n, p) as a float; exactly 1 at p = 2 and 2/p at n = 2."""
    if p == 2:
        return 1.0
    with PrecisionContext(128).active():
        return to_float(beta_iv(n, rational_p(p)))


def c_float(p: float) -> float:
    with PrecisionContext(128).active():
        return to_float(critical_c(rational_p(p)))


def pairsum_max(n: int, p: float) -> float:
    """Largest value of sum_{i<j} a_i a_j on sum a^p = 1, attained at the all-equal vector."""
    if n < 2 or p < 2:
        raise ValueError("need n >= 2, p >= 2")
    return math.comb(n, 2) * n ** (-2 / p)


@dataclass(frozen=True)
class SphereSliceProblem:
    n: int
    p: float
    b: float

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("need n >= 2")
        if self.p <= 2:
            raise ValueError("need p > 2")
        top = pairsum_max(self.n, self.p)
        if not (-CONSTRAINT_TOL <= self.b <= top + CONSTRAINT_TOL):
            raise ValueError(f"b = {self.b} outside the feasible window [0, {top}]")

    @property
    def b_max(self) -> float:
        return pairsum_max(self.n, self.p)

    def residuals(self, a: Sequence[float]) -> tuple[float, float]:
        a = np.asarray(a, float)
        s1, s2 = a.sum(), (a * a).sum()
        return float((a**self.p).sum() - 1), float((s1 * s1 - s2) / 2 - self.b)


@dataclass(frozen=True)
class TwoValueCandidate:
    """k copies of x, m - k copies of y, the rest zero; k x^p + (m-k) y^p = 1."""

    k: int
    m: int
    x: float
    y: float
    n: int

    @property
    def objective(self) -> float:
        return self.k * self.x + (self.m - self.k) * self.y

    def vector(self) -> list[float]:
        return [self.x] * self.k + [self.y] * (self.m - self.k) + [0.0] * (self.n - self.m)

    @property
    def interior(self) -> bool:
        return self.m == self.n and self.x > 0 and self.y > 0


def _pair_sum_of_t(k: int, j: int, p: float, t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """For k copies of x and j copies of y = t x on the sphere: (x, pair sum)."""
    x = (k + j * t**p) ** (-1 / p)
    pairs = math.comb(k, 2) + math.comb(j, 2) * t * t + k * j * t
    return x, x * x * pairs


def two_value_scan(prob: SphereSliceProblem, resolution: int = 2000) -> TwoValueCandidate:
    """Best objective over the two-value family; the endpoints b = 0 and b = max are closed forms."""
    n, p, b = prob.n, prob.p, prob.b
    if b <= CONSTRAINT_TOL:
        return TwoValueCandidate(1, 1, 1.0, 0.0, n)
    if abs(b - prob.b_max) <= CONSTRAINT_TOL:
        return TwoValueCandidate(n, n, n ** (-1 / p), 0.0, n)
    t = np.concatenate([[0.0], np.logspace(-9, 0, resolution)])
    best: TwoValueCandidate | None = None
    for m in range(1, n + 1):
        for k in range(1, m + 1):
            j = m - k
            if j == 0:
                x, bb = _pair_sum_of_t(k, 0, p, np.array([0.0]))
                if abs(bb[0] - b) <= CONSTRAINT_TOL:
                    cand = TwoValueCandidate(k, m, float(x[0]), 0.0, n)
                    best = cand if best is None or cand.objective > best.objective else best
                continue
            _, bt = _pair_sum_of_t(k, j, p, t)
            r = bt - b
            idx = np.nonzero(np.sign(r[:-1]) * np.sign(r[1:]) <= 0)[0]
            for i in idx:
                lo, hi = t[i], t[i + 1]
                rlo = r[i]
                for _ in range(80):
                    mid = 0.5 * (lo + hi)
                    rm = _pair_sum_of_t(k, j, p, np.array([mid]))[1][0] - b
                    if (rm <= 0) == (rlo <= 0):
                        lo, rlo = mid, rm
                    else:
                        hi = mid
                tt = 0.5 * (lo + hi)
                x, bb = _pair_sum_of_t(k, j, p, np.array([tt]))
                if abs(bb[0] - b) > 1e-9:
                    continue
                cand = TwoValueCandidate(k, m, float(x[0]), float(tt * x[0]), n)
                if best is None or cand.objective > best.objective:
                    best = cand
    if best is None:
        raise ValueError("no two-value candidate meets the constraints")
    return best


def _solve_last_two(R: np.ndarray, S: np.ndarray, target: np.ndarray, p: float, steps: int = 256):
    """Solve u^p + v^p = R, uv + (u+v) S = target for u <= v; returns rows (idx, u, v)."""
    th = np.linspace(0.0, 0.5, steps + 1)
    Rp = R[:, None]
    u = (Rp * th) ** (1 / p)
    v = (Rp * (1 - th)) ** (1 / p)
    res = u * v + (u + v) * S[:, None] - target[:, None]
    # a grid point with |res| tiny counts as a root (tangential case, e.g. the all-equal vector)
    res = np.where(np.abs(res) <= 1e-13, 0.0, res)
    rows, cols = np.nonzero(np.sign(res[:, :-1]) * np.sign(res[:, 1:]) <= 0)
    if rows.size == 0:
        return rows, np.empty(0), np.empty(0)
    lo, hi = th[cols].copy(), th[cols + 1].copy()
    Rr, Sr, Tr = R[rows], S[rows], target[rows]

    def f(x):
        uu, vv = (Rr * x) ** (1 / p), (Rr * (1 - x)) ** (1 / p)
        return uu * vv + (uu + vv) * Sr - Tr

    flo = f(lo)
    for _ in range(60):
        md = 0.5 * (lo + hi)
        fm = f(md)
        same = np.sign(fm) == np.sign(flo)
        lo = np.where(same, md, lo)
        flo = np.where(same, fm, flo)
        hi = np.where(same, hi, md)
    x = 0.5 * (lo + hi)
    return rows, (Rr * x) ** (1 / p), (Rr * (1 - x)) ** (1 / p)


def _grid_max(prob: SphereSliceProblem, axes: list[np.ndarray]) -> tuple[float, np.ndarray | None]:
    n, p, b = prob.n, prob.p, prob.b
    if n - 2 > 0:
        mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, n - 2)
    else:
        mesh = np.zeros((1, 0))
    R = 1 - (mesh**p).sum(axis=1)
    ok = R >= 0
    mesh, R = mesh[ok], R[ok]
    S = mesh.sum(axis=1)
    B0 = (S * S - (mesh * mesh).sum(axis=1)) / 2
    rows, u, v = _solve_last_two(R, S, b - B0, p)
    if rows.size == 0:
        return -math.inf, None
    obj = S[rows] + u + v
    i = int(np.argmax(obj))
    return float(obj[i]), np.concatenate([mesh[rows[i]], [u[i], v[i]]])


def brute_force_max(prob: SphereSliceProblem, grid_step: float = 0.02) -> float:
    """Grid over the first n-2 coordinates; the last two solve both constraints; one refinement pass."""
    if prob.n > 5:
        raise ValueError("brute force is limited to n <= 5")
    if grid_step <= 0:
        raise ValueError("grid_step must be positive")
    k = prob.n - 2
    # the all-equal coordinate is added as a landmark so the top of the b-window stays reachable
    axis = np.union1d(np.arange(0.0, 1.0 + grid_step / 2, grid_step), [prob.n ** (-1 / prob.p)])
    best, arg = _grid_max(prob, [axis] * k)
    if arg is None:
        if prob.b <= CONSTRAINT_TOL:
            return 1.0
        raise ValueError("grid found no feasible point; reduce grid_step")
    if k:
        fine = [np.clip(np.linspace(a - grid_step, a + grid_step, 21), 0, 1) for a in arg[:k]]
        polished, parg = _grid_max(prob, fine)
        if parg is not None and polished > best:
            best, arg = polished, parg
    r1, r2 = prob.residuals(arg)
    if abs(r1) > 1e-8 or abs(r2) > 1e-8:
        raise ValueError("brute-force maximizer misses the constraints")
    return best


def gamma_p(a: Sequence[float], n: int, p: float) -> float:
    """[C(n,2)^-1 sum_{i<j} a_i a_j]^(p/2) / [n^-1 sum a^p] for the indicator case."""
    a = np.asarray(a, float)
    if a.shape != (n,):
        raise ValueError(f"need a vector of length {n}")
    if np.any(a < 0) or not np.any(a > 0):
        raise ValueError("need a nonnegative, nonzero vector")
    s1, s2 = a.sum(), (a * a).sum()
    pairs = (s1 * s1 - s2) / 2 / math.comb(n, 2)
    return float(max(pairs, 0.0) ** (p / 2) / ((a**p).sum() / n))


def num1_slack(a: np.ndarray, n: int, p: float, beta: float) -> np.ndarray:
    """RHS - LHS of the n-function amplitude inequality; rows of ``a`` lie on sum a^p = 1."""
    a = np.atleast_2d(np.asarray(a, float))
    s1, s2 = a.sum(axis=1), (a * a).sum(axis=1)
    pairs = np.maximum((s1 * s1 - s2) / 2 / math.comb(n, 2), 0.0)
    return 1 + (n - 1) * (n * pairs ** (p / 2)) ** beta - s1 ** (p / (p - 1))


@dataclass
class ScanSummary:
    """Min slack over a sample set together with the worst point."""

    inequality: str
    n: int
    p: float
    min_slack: float
    witness: list[float]
    samples: int
    seed: int
    diagnostic: bool = False
    extras: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.min_slack >= -SLACK_TOL

    def as_result(self) -> LemmaResult:
        status = Status.PASS if self.ok else (Status.INDETERMINATE if self.diagnostic else Status.FAIL)
        return LemmaResult(
            self.inequality,
            status,
            p=self.p,
            witnesses={"n": self.n, "min slack": self.min_slack, "witness": self.witness, "samples": self.samples, "seed": self.seed, **self.extras},
            note="diagnostic: no theorem is claimed in this regime" if self.diagnostic else "",
        )


def _sphere_samples(rng: np.random.Generator, n: int, p: float, samples: int) -> np.ndarray:
    d = np.abs(rng.standard_normal((samples, n)))
    # sprinkle exact zeros so faces of the orthant are covered
    d[rng.random((samples, n)) < 0.1] = 0.0
    d[d.sum(axis=1) == 0, 0] = 1.0
    return d / ((d**p).sum(axis=1) ** (1 / p))[:, None]


def _two_value_samples(rng: np.random.Generator, n: int, p: float, samples: int) -> np.ndarray:
    out = np.zeros((samples, n))
    m = rng.integers(1, n + 1, samples)
    k = np.array([rng.integers(1, mm + 1) for mm in m])
    t = rng.random(samples)
    x = (k + (m - k) * t**p) ** (-1 / p)
    for i in range(samples):
        out[i, : k[i]] = x[i]
        out[i, k[i] : m[i]] = t[i] * x[i]
    return out


def verify_num1(n: int, p: float, samples: int = 100_000, seed: int = 0) -> ScanSummary:
    """Min slack of the amplitude inequality; a theorem for n = 3, p >= 3, diagnostic otherwise."""
    if n <= 2 or p < 2:
        raise ValueError("need n > 2, p >= 2")
    rng = np.random.default_rng(seed)
    bt = beta_float(n, p)
    sym = np.full((1, n), n ** (-1 / p))
    e1 = np.zeros((1, n))
    e1[0, 0] = 1.0
    pts = np.vstack([_sphere_samples(rng, n, p, samples), _two_value_samples(rng, n, p, max(samples // 10, 1)), sym, e1])
    sl = num1_slack(pts, n, p, bt)
    i = int(np.argmin(sl))
    return ScanSummary(
        "num1",
        n,
        p,
        float(sl[i]),
        sorted(pts[i].tolist(), reverse=True),
        samples,
        seed,
        diagnostic=not (n == 3 and p >= 3),
        extras={"symmetric slack": float(sl[-2]), "corner slack": float(sl[-1]), "beta": bt},
    )


def distinct_values(vec: Sequence[float], tol: float = 1e-2) -> int:
    """Number of clusters among the sorted coordinates at spacing ``tol``."""
    v = sorted(vec)
    return 1 + sum(1 for a, b in zip(v, v[1:]) if b - a > tol)


def phi(n: int, p: float, t, *, bt: float | None = None):
    """(1 + (n-1)(t n C(n,2)^(-p/2))^beta)^(p-1) on [0, C(n,2)^(p/2)/n]."""
    t = np.asarray(t, float)
    top = math.comb(n, 2) ** (p / 2) / n
    if np.any(t < 0) or np.any(t > top * (1 + 1e-12)):
        raise ValueError(f"t must lie in [0, {top}]")
    bt = beta_float(n, p) if bt is None else bt
    return (1 + (n - 1) * (t * n * math.comb(n, 2) ** (-p / 2)) ** bt) ** (p - 1)


def phi_concavity_check(n: int, p: float, grid_size: int = 10_000) -> tuple[float, float]:
    """(max centred second difference / scale, min first difference / scale) on a uniform grid."""
    top = math.comb(n, 2) ** (p / 2) / n
    t = np.linspace(0.0, top, grid_size)
    y = phi(n, p, t)
    scale = max(1.0, float(np.max(np.abs(y))))
    d2 = y[:-2] - 2 * y[1:-1] + y[2:]
    d1 = np.diff(y)
    return float(d2.max() / scale), float(d1.min() / scale)


def concavity_hinge(n: int, p: float) -> tuple[float, float]:
    """(h(0), h(1)) for h(t) = beta - 1 + u t^beta (v beta - 1), u = n-1, v = p-1."""
    if n <= 2 or p < 2:
        raise ValueError("need n > 2, p >= 2")
    bt = beta_float(n, p)
    u, v = n - 1, p - 1
    return bt - 1, bt - 1 + u * (v * bt - 1)


def dax1_gap(n: int, p: float) -> float:
    """n/(1+(n-1)(p-1)) - beta(n,p); nonnegative when the bound on beta holds."""
    return n / (1 + (n - 1) * (p - 1)) - beta_float(n, p)


def verify_cfl_discrete(inst: DiscreteInstance, n: int | None = None, p: float | None = None, r: float | None = None) -> float:
    """(1+(n-1)Gamma^r)(sum ||f_j||^p)^(1/(p-1)) - ||sum f_j||_p^(p') with r = beta(n,p) by default.

    In this normalization an instance a_j 1_A with |A| = 1 and sum a^p = 1 gives
    exactly the amplitude slack of :func:`num1_slack`.
    """
    n = inst.n if n is None else n
    if n != inst.n:
        raise ValueError("instance size does not match n")
    p = float(inst.p) if p is None else float(p)
    r = beta_float(n, p) if r is None else r
    w = np.array([float(x) for x in inst.weights])
    F = np.array([[float(x) for x in row] for row in inst.values])
    S = F.sum(axis=0)
    lhs = float((w * S**p).sum())
    A = float((w * (F**p).sum(axis=0)).sum())
    if A == 0:
        return 0.0
    pairs = ((S * S - (F * F).sum(axis=0)) / 2) / math.comb(n, 2)
    gamma = float((w * np.maximum(pairs, 0) ** (p / 2)).sum()) / (A / n)
    return (1 + (n - 1) * gamma**r) * A ** (1 / (p - 1)) - lhs ** (1 / (p - 1))


def verify_two_function(p: float, samples: int = 100_000) -> dict[str, float]:
    """Min slacks of (x+y)^(p') <= 1 + (2 x^(p/2) y^(p/2))^c(p) and <= 1 + 2^(2/p) x y on x^p + y^p = 1."""
    if p < 2:
        raise ValueError("need p >= 2")
    th = np.linspace(0.0, 1.0, samples + 1)
    x, y = th ** (1 / p), (1 - th) ** (1 / p)
    c = c_float(p)
    lhs = (x + y) ** (p / (p - 1))
    s_c = 1 + (2 * (x * y) ** (p / 2)) ** c - lhs
    s_strong = 1 + 2 ** (2 / p) * x * y - lhs
    sym = 2 ** (-1 / p)
    return {
        "min slack (c(p) form)": float(s_c.min()),
        "min slack (stronger form)": float(s_strong.min()),
        "corner slack": float(s_c[-1]),
        "symmetric slack": float(1 + (2 * sym**p) ** c - (2 * sym) ** (p / (p - 1))),
        "strong dominates": bool(np.all(s_c >= s_strong - 1e-12)) if p >= 2 else False,
    }


def reduction_oracle(n: int, p: float, b_count: int = 10, grid_step: float = 0.02) -> LemmaResult:
    """brute_force_max <= two_value_scan + 1e-3 over b_count interior b values plus the closed-form endpoints."""
    t0 = time.perf_counter()
    top = pairsum_max(n, p)
    rows = []
    ok = True
    for b in np.linspace(0, top, b_count + 2)[1:-1]:
        prob = SphereSliceProblem(n, p, float(b))
        tv = two_value_scan(prob)
        bf = brute_force_max(prob, grid_step)
        ok &= bf <= tv.objective + 1e-3
        rows.append({"b": float(b), "two-value": tv.objective, "brute": bf, "winner interior": tv.interior})
    e0 = two_value_scan(SphereSliceProblem(n, p, 0.0)).objective
    e1 = two_value_scan(SphereSliceProblem(n, p, top)).objective
    ends = abs(e0 - 1) <= 1e-6 and abs(e1 - n ** (1 - 1 / p)) <= 1e-6
    return LemmaResult(
        "two-value-reduction",
        Status.PASS if ok and ends else Status.FAIL,
        p=p,
        witnesses={"n": n, "rows": rows, "objective at b=0": e0, "objective at b=max": e1},
        elapsed_ms=(time.perf_counter() - t0) * 1000,
    )
