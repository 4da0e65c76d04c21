"""Run configuration, JSON reports, and CSV/SVG figure emission."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, fields
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import __version__
from .constants import rational_p
from .functions import Tag, eval_named
from .intervals import PrecisionContext, mid, radius
from .results import LemmaResult, Status

SCHEMA_VERSION = 1
DEFAULT_GRID = "3.01:60:log:24"
SUITES = ("appendix", "boundary", "patterns", "endpoint", "main")


class UsageError(ValueError):
    """Bad configuration or arguments; the CLI maps it to exit code 64."""


def parse_grid(spec: str) -> list[Fraction]:
    """'min:max:scale:count' with scale lin or log; points are rounded to 6 decimals."""
    parts = spec.split(":")
    if len(parts) != 4:
        raise UsageError(f"grid spec {spec!r} must look like min:max:scale:count")
    try:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[3])
    except ValueError as exc:
        raise UsageError(f"grid spec {spec!r}: {exc}") from None
    scale = parts[2]
    if count < 1 or not lo <= hi or scale not in ("lin", "log") or (scale == "log" and lo <= 0):
        raise UsageError(f"grid spec {spec!r}: need count >= 1, min <= max, scale lin|log")
    if count == 1:
        xs = [hi]
    elif scale == "lin":
        xs = [lo + (hi - lo) * i / (count - 1) for i in range(count)]
    else:
        xs = [lo * (hi / lo) ** (i / (count - 1)) for i in range(count)]
    return [Fraction(f"{x:.6f}") for x in xs]


def _parse_p(text: str) -> Fraction:
    try:
        return rational_p(Fraction(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad p value {text!r}: {exc}") from None


@dataclass
class RunConfig:
    precision_bits: int = 256
    p_grid: str = DEFAULT_GRID
    p_values: list[str] = field(default_factory=list)
    seed: int = 0
    suite: str = "all"
    out_dir: str = "."
    tolerances: dict[str, float] = field(default_factory=dict)
    timing: bool = True

    def validate(self, *, discrete: bool = False) -> None:
        if self.precision_bits < 64:
            raise UsageError("precision bits must be >= 64")
        if self.suite not in (*SUITES, "all"):
            raise UsageError(f"unknown suite {self.suite!r}")
        floor = 2 if discrete else 3
        for p in self.ps():
            if p <= floor:
                raise UsageError(f"p = {p} must exceed {floor} for this suite")

    def ps(self) -> list[Fraction]:
        if self.p_values:
            return [_parse_p(x) for x in self.p_values]
        return parse_grid(self.p_grid)

    def echo(self) -> dict:
        d = asdict(self)
        d.pop("timing")
        return d

    @classmethod
    def from_text(cls, text: str) -> "RunConfig":
        """Flat key=value lines; '#' starts a comment; tol.<name>=value sets a tolerance."""
        cfg = cls()
        known = {f.name for f in fields(cls)}
        for ln in text.splitlines():
            ln = ln.split("#", 1)[0].strip()
            if not ln:
                continue
            if "=" not in ln:
                raise UsageError(f"config line {ln!r} is not key=value")
            key, val = (x.strip() for x in ln.split("=", 1))
            key = key.replace("-", "_")
            if key.startswith("tol."):
                cfg.tolerances[key[4:]] = float(val)
            elif key == "p_values" or key == "p":
                cfg.p_values = [v for v in val.replace(",", " ").split() if v]
            elif key in ("precision_bits", "seed"):
                setattr(cfg, key, int(val))
            elif key in known:
                setattr(cfg, key, val)
            else:
                raise UsageError(f"unknown config key {key!r}")
        return cfg


def summarize(results: Sequence[LemmaResult]) -> dict[str, int]:
    out = {"pass": 0, "fail": 0, "indeterminate": 0}
    for r in results:
        out[r.status.value.lower()] += 1
    return out


def _sort_key(r: LemmaResult):
    p = r.p
    try:
        pv = float(Fraction(p)) if p is not None else -1.0
    except (TypeError, ValueError):
        pv = -1.0
    return (r.lemma_id, pv, r.c_regime)


@dataclass
class VerificationReport:
    config: dict
    results: list[LemmaResult]
    timing_ms: dict[str, float] = field(default_factory=dict)
    version: str = __version__

    def __post_init__(self):
        self.results = sorted(self.results, key=_sort_key)

    @property
    def summary(self) -> dict[str, int]:
        return summarize(self.results)

    @property
    def status(self) -> Status:
        return Status.combine(r.status for r in self.results) if self.results else Status.PASS

    def exit_code(self) -> int:
        return {Status.PASS: 0, Status.FAIL: 1, Status.INDETERMINATE: 2}[self.status]

    def to_dict(self, timing: bool = True) -> dict:
        res = []
        for r in self.results:
            d = r.to_dict()
            if not timing:
                d["elapsed_ms"] = 0.0
            res.append(d)
        return {
            "schema": SCHEMA_VERSION,
            "version": self.version,
            "config": self.config,
            "results": res,
            "summary": self.summary,
            "timing_ms": {k: (round(v, 3) if timing else 0.0) for k, v in sorted(self.timing_ms.items())},
        }

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "VerificationReport":
        if d.get("schema") != SCHEMA_VERSION:
            raise ValueError("unsupported report schema")
        rep = cls(d["config"], [LemmaResult.from_dict(x) for x in d["results"]], dict(d.get("timing_ms", {})), d["version"])
        if rep.summary != d["summary"]:
            raise ValueError("summary counts do not match the result list")
        return rep

    @classmethod
    def from_json(cls, text: str) -> "VerificationReport":
        return cls.from_dict(json.loads(text))

    def write(self, path: str | Path, timing: bool = True) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.to_json(timing))
        return path


# ---------------------------------------------------------------------------
# figures


def parse_range(spec: str) -> tuple[Fraction, Fraction]:
    try:
        a, b = (Fraction(x) for x in spec.split(":"))
    except ValueError:
        raise UsageError(f"range {spec!r} must look like lo:hi") from None
    if not 0 <= a < b:
        raise UsageError(f"range {spec!r}: need 0 <= lo < hi")
    return a, b


def sample_points(lo: Fraction, hi: Fraction, points: int, log_x: bool) -> list[Fraction]:
    if points < 1:
        raise UsageError("need at least one point")
    if points == 1:
        return [lo]
    if log_x and lo > 0:
        r = float(hi / lo)
        return [Fraction(f"{float(lo) * r ** (i / (points - 1)):.12g}") for i in range(points)]
    return [lo + (hi - lo) * i / (points - 1) for i in range(points)]


def sample_function(tag: Tag | str, p, s_values: Sequence[Fraction], bits: int = 256) -> list[tuple[float, float, float]]:
    """(s, midpoint, radius) per sample; psi refuses samples within 1e-6 of its singular point s = 1."""
    tag = Tag(tag)
    if tag in (Tag.PSI, Tag.PSI_PRIME):
        bad = [s for s in s_values if s == 0 or (abs(s - 1) < Fraction(1, 10**6) and not (tag is Tag.PSI and s == 1))]
        if bad:
            raise UsageError(
                f"{tag.value} is singular at s = {float(bad[0])}; exclude a band around s = 1 (and s = 0), "
                "e.g. split the range at 0.999999 and 1.000001"
            )
    if tag not in (Tag.H_FN,) and any(s == 0 for s in s_values):
        s_values = [s if s else Fraction(1, 10**12) for s in s_values]
    rows = []
    ctx = PrecisionContext(bits)
    for s in s_values:
        v = eval_named(tag, p, None, s, ctx)
        with ctx.active():
            rows.append((float(s), float(mid(v)), float(radius(v))))
    return rows


def to_csv(rows: Sequence[tuple[float, float, float]]) -> str:
    out = ["s,value,error_radius"]
    for s, v, r in rows:
        out.append(f"{s!r},{v!r},{abs(r)!r}")
    return "\n".join(out) + "\n"


_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def to_svg(series: dict[str, Sequence[tuple[float, float, float]]], title: str = "", log_x: bool = False) -> str:
    """Self-contained 960x540 line chart, one polyline per series, with axes and a zero line."""
    W, H, L, R, T, B = 960, 540, 70, 20, 40, 50

    def fx(s):
        return math.log10(s) if log_x else s

    pts = [(fx(s), v) for rows in series.values() for s, v, _ in rows if math.isfinite(v) and (s > 0 or not log_x)]
    if not pts:
        raise UsageError("nothing to plot")
    x0, x1 = min(p[0] for p in pts), max(p[0] for p in pts)
    y0, y1 = min(min(p[1] for p in pts), 0.0), max(max(p[1] for p in pts), 0.0)
    x1 = x1 if x1 > x0 else x0 + 1
    y1 = y1 if y1 > y0 else y0 + 1

    def X(x):
        return L + (x - x0) / (x1 - x0) * (W - L - R)

    def Y(y):
        return H - B - (y - y0) / (y1 - y0) * (H - T - B)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {W} {H}" width="{W}" height="{H}">',
        f'<rect x="0" y="0" width="{W}" height="{H}" fill="#ffffff"/>',
        f'<text x="{W // 2}" y="24" text-anchor="middle" font-family="sans-serif" font-size="16">{title}</text>',
        f'<line x1="{L}" y1="{H - B}" x2="{W - R}" y2="{H - B}" stroke="#000000"/>',
        f'<line x1="{L}" y1="{T}" x2="{L}" y2="{H - B}" stroke="#000000"/>',
        f'<line x1="{L}" y1="{Y(0):.2f}" x2="{W - R}" y2="{Y(0):.2f}" stroke="#888888" stroke-dasharray="4 4"/>',
    ]
    for i in range(5):
        xv = x0 + (x1 - x0) * i / 4
        label = f"1e{xv:.2g}" if log_x else f"{xv:.4g}"
        out.append(f'<text x="{X(xv):.2f}" y="{H - B + 18}" text-anchor="middle" font-family="sans-serif" font-size="11">{label}</text>')
        yv = y0 + (y1 - y0) * i / 4
        out.append(f'<text x="{L - 6}" y="{Y(yv) + 4:.2f}" text-anchor="end" font-family="sans-serif" font-size="11">{yv:.4g}</text>')
    for k, (name, rows) in enumerate(series.items()):
        coords = " ".join(f"{X(fx(s)):.2f},{Y(v):.2f}" for s, v, _ in rows if math.isfinite(v) and (s > 0 or not log_x))
        color = _PALETTE[k % len(_PALETTE)]
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{coords}"/>')
        out.append(f'<text x="{W - R - 10}" y="{T + 16 * (k + 1)}" text-anchor="end" font-family="sans-serif" font-size="12" fill="{color}">{name}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def sign_changes_in(rows: Sequence[tuple[float, float, float]]) -> int:
    """Certified sign changes along the samples (midpoints whose radius excludes zero)."""
    signs = [math.copysign(1, v) for _, v, r in rows if abs(v) > r]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)
