"""Exact rational scalars and their text form ("p/q" or integer strings)."""

import re
from fractions import Fraction

_RATIONAL = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


def parse_scalar(text) -> Fraction:
    """Parse an exact rational; floats and decimal strings are refused."""
    if isinstance(text, bool):
        raise ValueError("booleans are not scalars")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, Fraction):
        return text
    if not isinstance(text, str):
        raise ValueError(f"rationals must be given as 'p/q' strings, got {text!r}")
    m = _RATIONAL.match(text)
    if not m:
        raise ValueError(f"not an exact rational: {text!r}")
    num, den = m.group(1), m.group(2)
    if den is not None and int(den) == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den) if den else 1)


def format_scalar(c) -> str:
    return str(Fraction(c))
