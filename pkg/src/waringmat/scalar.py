"""Exact rational scalars.

All arithmetic in the package runs over ``gmpy2.mpq``: arbitrary precision,
always in lowest terms with a positive denominator and a unique zero ``0/1``.
It compares and hashes equal to :class:`fractions.Fraction`, and inputs given
as ``int``, ``Fraction`` or ``"p/q"`` text are converted on entry.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Union

from gmpy2 import mpq, mpz

Rational = type(mpq())

ScalarLike = Union[Rational, Fraction, int, str]

_SCALAR_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


class ScalarFormatError(ValueError):
    pass


def parse_scalar(text: str) -> Rational:
    """Parse ``"5"``, ``"-3/4"`` or ``"+2/6"`` into a reduced rational."""
    m = _SCALAR_RE.match(text)
    if m is None:
        raise ScalarFormatError(f"not a rational scalar: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ScalarFormatError(f"zero denominator in {text!r}")
    return mpq(num, den)


def render_scalar(x: ScalarLike) -> str:
    x = as_rational(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def as_rational(x: ScalarLike) -> Rational:
    if isinstance(x, Rational):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(x, (int, Fraction, type(mpz()))):
        return mpq(x)
    if isinstance(x, str):
        return parse_scalar(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def is_scalar_value(x) -> bool:
    return isinstance(x, (Rational, Fraction, int)) and not isinstance(x, bool)


def inv(x: ScalarLike) -> Rational:
    """Field inverse; raises ZeroDivisionError for zero."""
    x = as_rational(x)
    if x == 0:
        raise ZeroDivisionError("inverse of zero")
    return 1 / x


def parse_scalar_list(text: str) -> list[Rational]:
    """Comma separated scalars, as given to ``--lambdas "1,2,3"``."""
    parts = [p for p in text.split(",") if p.strip()]
    if not parts:
        raise ScalarFormatError("empty scalar list")
    return [parse_scalar(p) for p in parts]


def render_scalar_list(xs: Iterable[ScalarLike]) -> list[str]:
    return [render_scalar(x) for x in xs]
