"""Exact rational carrier with infinite sentinels.

Finite quantities are always :class:`fractions.Fraction`.  The two
infinities are plain float sentinels; ``Fraction`` compares and adds
correctly against them, so ``max``/``min`` over mixed values behave as
on the extended real line.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Union

Rat = Fraction
ExtRat = Union[Fraction, float]

NEG_INF: float = float("-inf")
POS_INF: float = float("inf")

_RAT_RE = re.compile(r"^([+-]?\d+)(?:/(\d+))?$")


def rat(value) -> Fraction:
    """Coerce ``value`` to an exact Fraction.

    Accepts ints, Fractions and ``"p/q"`` / ``"p"`` strings.  Floats are
    rejected so that rounding cannot leak into the core.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rat(value)
    if hasattr(value, "numerator") and hasattr(value, "denominator") and not isinstance(value, float):
        return Fraction(int(value.numerator), int(value.denominator))
    raise TypeError(f"cannot convert {value!r} to an exact rational")


def ext(value) -> ExtRat:
    """Like :func:`rat` but lets the two infinities through."""
    if isinstance(value, float):
        if math.isinf(value):
            return value
        raise TypeError(f"finite float {value!r} is not exact")
    if isinstance(value, str):
        s = value.strip()
        if s in ("inf", "+inf"):
            return POS_INF
        if s == "-inf":
            return NEG_INF
    return rat(value)


def parse_rat(text: str) -> Fraction:
    m = _RAT_RE.match(text.strip())
    if m is None:
        raise ValueError(f"malformed rational {text!r}: expected p or p/q")
    num, den = m.group(1), m.group(2)
    if den is not None and int(den) == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den) if den else 1)


def is_finite(value: ExtRat) -> bool:
    return not (isinstance(value, float) and math.isinf(value))


def fmt(value: ExtRat) -> str:
    """Canonical rendering: ``p/q`` or ``p`` for integers, ``inf``/``-inf``."""
    if isinstance(value, float):
        if value == POS_INF:
            return "inf"
        if value == NEG_INF:
            return "-inf"
        raise TypeError(f"finite float {value!r} is not exact")
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def ceil(value: Fraction) -> int:
    return -((-value.numerator) // value.denominator)


def floor(value: Fraction) -> int:
    return value.numerator // value.denominator
