"""Scalar handling shared by every module.

Two numeric modes exist: ``"exact"`` (``fractions.Fraction``) and ``"float"``
(Python floats).  The mode is chosen per call; nothing here is global.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Union

Scalar = Union[Fraction, float]

EXACT = "exact"
FLOAT = "float"
MODES = (EXACT, FLOAT)


def check_mode(mode: str) -> str:
    if mode not in MODES:
        raise ValueError(f"unknown numeric mode {mode!r}; expected 'exact' or 'float'")
    return mode


def is_exact(x) -> bool:
    return isinstance(x, Rational) and not isinstance(x, bool)


def to_fraction(x) -> Fraction:
    """Convert ``x`` to a Fraction without rounding.

    Strings are parsed as ``"num/den"`` or decimal literals.  Floats are
    converted to their exact binary value.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"non-finite scalar {x!r}")
        return Fraction(x)
    return Fraction(float(x))


def decimal_fraction(x) -> Fraction:
    """Like :func:`to_fraction` but reads floats through their shortest repr.

    Used for geometry coming from JSON, where ``0.1`` means one tenth.
    """
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"non-finite scalar {x!r}")
        return Fraction(repr(x))
    return to_fraction(x)


def coerce(x, mode: str) -> Scalar:
    if mode == EXACT:
        return to_fraction(x)
    return float(x)


def mode_of(values: Iterable) -> str | None:
    """Return the common mode of ``values`` or None when empty.

    Raises ValueError on a mix of exact and float entries.
    """
    seen = set()
    for v in values:
        seen.add(EXACT if is_exact(v) else FLOAT)
    if len(seen) > 1:
        raise ValueError("mixed exact and float scalars")
    return seen.pop() if seen else None


def format_scalar(x: Scalar):
    """JSON encoding: Fractions as "num/den" strings, floats as numbers."""
    if is_exact(x):
        f = Fraction(x)
        return f"{f.numerator}/{f.denominator}"
    return float(x)


def parse_scalar(raw) -> Scalar:
    if isinstance(raw, str):
        return Fraction(raw.strip())
    if isinstance(raw, bool) or not isinstance(raw, (int, float)):
        raise ValueError(f"expected a number or 'num/den' string, got {raw!r}")
    return float(raw)


def safe_float(x) -> float:
    """float(x) that saturates to +-inf instead of raising OverflowError."""
    try:
        return float(x)
    except OverflowError:
        return math.inf if x > 0 else -math.inf
