"""Exact rational scalars and their wire format.

All numeric work in this package runs on :class:`fractions.Fraction`, which
already guarantees the canonical form we need (positive denominator, reduced
terms, arbitrary precision).  This module pins down the one serialization
used everywhere: ``"p/q"`` for proper fractions and plain ``"p"`` for
integers.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .errors import ParseError

Rational = Fraction


def parse_rational(text: str | int, *, where: str = "") -> Fraction:
    """Parse ``"p/q"`` or ``"p"`` (or a bare int) into an exact rational."""
    if isinstance(text, bool):
        raise ParseError(f"{where or 'value'}: booleans are not numbers")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise ParseError(
            f"{where or 'value'}: expected a rational string like '11/2', got {type(text).__name__}"
        )
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"{where or 'value'}: cannot parse {text!r} as a rational") from exc


def format_rational(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parse_vector(items: Sequence[str | int], *, where: str = "") -> tuple[Fraction, ...]:
    return tuple(parse_rational(v, where=f"{where}[{i + 1}]") for i, v in enumerate(items))


def format_vector(values: Iterable[Fraction]) -> list[str]:
    return [format_rational(v) for v in values]
