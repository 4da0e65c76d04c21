"""Certified checks for sharpened L^p triangle inequalities with almost-orthogonality weights."""

from __future__ import annotations

__version__ = "0.1.0"
