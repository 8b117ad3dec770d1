"""Exact rational helpers and binary (dyadic) expansions.

All scalars are :class:`fractions.Fraction`, which keeps values in lowest
terms with a positive denominator after every operation. Floats are refused
at the boundary so that nothing inexact leaks into intervals or matrices.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Integral
from typing import Iterable, Union

RationalLike = Union[Fraction, int, str]


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


def as_rational(value: RationalLike) -> Fraction:
    """Coerce ``value`` to a Fraction without ever passing through a float.

    Accepts Fractions, integers and the textual forms ``"a/b"`` or ``"a"``.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Integral):
        return Fraction(int(value))
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"expected Fraction, int or 'a/b' string, got {type(value).__name__}")


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    num, sep, den = text.partition("/")
    try:
        n = int(num)
        d = int(den) if sep else 1
    except ValueError:
        raise DomainError(f"malformed rational {text!r}; expected 'a/b' or 'a'") from None
    if d == 0:
        raise DomainError(f"malformed rational {text!r}: zero denominator")
    return Fraction(n, d)


def format_rational(value: Fraction) -> str:
    """Render as ``"a/b"``, or ``"a"`` when the denominator is 1."""
    return str(value)


def as_probability(value: RationalLike) -> Fraction:
    p = as_rational(value)
    if not 0 < p < 1:
        raise DomainError("p must lie strictly inside (0,1)")
    return p


def as_bits(bits: Union[str, Iterable[int]]) -> str:
    """Normalize a bit sequence to an ASCII string of '0'/'1'."""
    if isinstance(bits, str):
        s = bits.strip()
    else:
        s = "".join("1" if b else "0" for b in _check_bit_ints(bits))
    if s.strip("01"):
        raise DomainError(f"bit strings may only contain '0' and '1', got {bits!r}")
    return s


def _check_bit_ints(bits: Iterable[int]) -> Iterable[int]:
    for b in bits:
        if b not in (0, 1):
            raise DomainError(f"bit values must be 0 or 1, got {b!r}")
        yield b


def binary_expansion(r: RationalLike, k: int) -> str:
    """First ``k`` bits after the binary point of ``r`` in [0, 1).

    Dyadic values use the terminating expansion, so 1/2 is ``100...``
    rather than ``0111...``.
    """
    r = as_rational(r)
    if not 0 <= r < 1:
        raise DomainError(f"binary_expansion needs 0 <= r < 1, got {r}")
    if k < 1:
        raise DomainError(f"bit count must be positive, got {k}")
    num, den = r.numerator, r.denominator
    out = []
    for _ in range(k):
        num <<= 1
        if num >= den:
            out.append("1")
            num -= den
        else:
            out.append("0")
    return "".join(out)


def dyadic_value(bits: Union[str, Iterable[int]]) -> Fraction:
    """Value of ``0.b1 b2 ... bk`` in binary; the empty string is 0."""
    s = as_bits(bits)
    if not s:
        return Fraction(0)
    return Fraction(int(s, 2), 1 << len(s))
