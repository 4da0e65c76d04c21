"""Check outcomes shared by every suite."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import mpmath

from .exact import RatPoly, SignSequence
from .intervals import Interval, as_pair


class Status(str, enum.Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    INDETERMINATE = "INDETERMINATE"

    @classmethod
    def combine(cls, statuses) -> "Status":
        statuses = list(statuses)
        if cls.FAIL in statuses:
            return cls.FAIL
        if cls.INDETERMINATE in statuses:
            return cls.INDETERMINATE
        return cls.PASS


def jsonable(x: Any) -> Any:
    """Convert witness values to plain JSON types; exact rationals become "a/b" strings."""
    if isinstance(x, enum.Enum):
        return x.value
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, float):
        return x if mpmath.isfinite(x) else str(x)
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, Interval):
        return {"interval": list(as_pair(x))}
    if isinstance(x, mpmath.mpf):
        return mpmath.nstr(x, 30)
    if isinstance(x, SignSequence):
        return str(x)
    if isinstance(x, RatPoly):
        return [jsonable(c) for c in x.coeffs]
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if hasattr(x, "item"):  # numpy scalars
        return jsonable(x.item())
    return str(x)


@dataclass
class LemmaResult:
    """Outcome of one named check.

    FAIL results carry a counter-witness; INDETERMINATE ones record the precision
    at which certification stalled in ``note``.
    """

    lemma_id: str
    status: Status
    p: Any = None
    c_regime: str = "c(p)"
    witnesses: dict[str, Any] = field(default_factory=dict)
    note: str = ""
    elapsed_ms: float = 0.0

    @property
    def passed(self) -> bool:
        return self.status is Status.PASS

    def to_dict(self) -> dict[str, Any]:
        return {
            "lemma_id": self.lemma_id,
            "status": self.status.value,
            "p": jsonable(self.p),
            "c_regime": self.c_regime,
            "witnesses": jsonable(self.witnesses),
            "note": self.note,
            "elapsed_ms": round(self.elapsed_ms, 3),
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "LemmaResult":
        return cls(
            lemma_id=d["lemma_id"],
            status=Status(d["status"]),
            p=d.get("p"),
            c_regime=d.get("c_regime", "c(p)"),
            witnesses=d.get("witnesses", {}),
            note=d.get("note", ""),
            elapsed_ms=d.get("elapsed_ms", 0.0),
        )
