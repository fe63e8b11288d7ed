"""Kähler and Kähler-Einstein metrics on cohomogeneity-one manifolds over flag manifolds."""

from __future__ import annotations

__version__ = "0.1.0"
