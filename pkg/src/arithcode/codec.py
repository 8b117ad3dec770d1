"""Binary arithmetic coder over exact rationals.

Bit 0 keeps the lower part ``[X, X + q(Y-X)]`` of the current interval and
bit 1 keeps the upper part ``[X + q(Y-X), Y]``, so a message with ``a`` ones
and ``b`` zeros ends in an interval of length ``p**a * q**b``.

Internally the endpoints are integer numerators over the running common
denominator ``d**k`` (``d`` being the denominator of ``p``); Fractions are only
built for the values handed back to callers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Tuple

from .exact import (
    DomainError,
    RationalLike,
    as_bits,
    as_probability,
    as_rational,
    format_rational,
)

__all__ = [
    "CodeInterval",
    "EncodeResult",
    "encode",
    "encode_interval",
    "decode",
    "first_disagreement_codeword",
    "midpoint_codeword",
    "subinterval_codeword",
]


@dataclass(frozen=True)
class CodeInterval:
    low: Fraction
    high: Fraction

    def __post_init__(self):
        if not 0 <= self.low < self.high <= 1:
            raise DomainError(f"invalid code interval [{self.low}, {self.high}]")

    @property
    def length(self) -> Fraction:
        return self.high - self.low

    @property
    def midpoint(self) -> Fraction:
        return (self.low + self.high) / 2

    def contains(self, value: Fraction) -> bool:
        return self.low <= value <= self.high

    def to_json(self) -> dict:
        return {"low": format_rational(self.low), "high": format_rational(self.high)}

    @classmethod
    def from_json(cls, obj: dict) -> "CodeInterval":
        return cls(as_rational(obj["low"]), as_rational(obj["high"]))


UNIT = CodeInterval(Fraction(0), Fraction(1))


@dataclass(frozen=True)
class EncodeResult:
    final: CodeInterval
    trace: Tuple[CodeInterval, ...]


def _refinements(message: str, p: Fraction) -> Iterator[Tuple[int, int, int]]:
    # Yields (x, y, scale) with X = x/scale, Y = y/scale after each bit.
    a, d = p.numerator, p.denominator
    qa = d - a
    x, y, scale = 0, 1, 1
    for bit in message:
        s = x * d + qa * (y - x)
        if bit == "0":
            x, y = x * d, s
        else:
            x, y = s, y * d
        scale *= d
        yield x, y, scale


def encode(message, p: RationalLike) -> EncodeResult:
    """Encode ``message`` and return the final interval plus one interval per bit."""
    message = as_bits(message)
    p = as_probability(p)
    trace = tuple(
        CodeInterval(Fraction(x, scale), Fraction(y, scale))
        for x, y, scale in _refinements(message, p)
    )
    return EncodeResult(trace[-1] if trace else UNIT, trace)


def encode_interval(message, p: RationalLike) -> CodeInterval:
    """Final interval only; skips building the trace."""
    message = as_bits(message)
    p = as_probability(p)
    x, y, scale = 0, 1, 1
    for x, y, scale in _refinements(message, p):
        pass
    return CodeInterval(Fraction(x, scale), Fraction(y, scale))


def decode(value: RationalLike, n: int, p: RationalLike) -> str:
    """Recover ``n`` message bits from any ``value`` in ``[low, high)``.

    A value exactly on a split point is sent to the upper (bit 1) branch.
    """
    v = as_rational(value)
    p = as_probability(p)
    if not 0 <= v < 1:
        raise DomainError(f"decode value must lie in [0, 1), got {v}")
    if n < 0:
        raise DomainError(f"message length must be >= 0, got {n}")
    a, d = p.numerator, p.denominator
    qa = d - a
    vn, vd = v.numerator, v.denominator
    x, y, scale = 0, 1, 1
    out = []
    for _ in range(n):
        s = x * d + qa * (y - x)
        scale *= d
        if vn * scale < s * vd:
            out.append("0")
            x, y = x * d, s
        else:
            out.append("1")
            x, y = s, y * d
    return "".join(out)


def _common(iv: CodeInterval) -> Tuple[int, int, int]:
    den = iv.low.denominator * iv.high.denominator
    return iv.low.numerator * iv.high.denominator, iv.high.numerator * iv.low.denominator, den


def first_disagreement_codeword(iv: CodeInterval) -> str:
    """Prefix of the high end's expansion up to the first bit where the ends differ.

    ``high == 1`` is read as ``0.111...``, which makes the answer a run of ones
    ending where the low end first shows a 0.
    """
    lo, hi, den = _common(iv)
    if hi == den:
        k = 1
        while True:
            lo <<= 1
            if lo < den:
                return "1" * k
            lo -= den
            k += 1
    out = []
    while True:
        lo <<= 1
        hi <<= 1
        lb, hb = lo >= den, hi >= den
        out.append("1" if hb else "0")
        if lb != hb:
            return "".join(out)
        if lb:
            lo -= den
            hi -= den


def midpoint_codeword(iv: CodeInterval) -> str:
    """Shortest truncation of the midpoint's expansion that still lies in the interval."""
    mid = iv.midpoint
    num, den = mid.numerator, mid.denominator
    low = iv.low
    k, acc = 0, 0
    out = []
    # truncations never exceed mid <= high, so only the low end needs checking
    while Fraction(acc, 1 << k) < low:
        num <<= 1
        bit = num >= den
        if bit:
            num -= den
        acc = (acc << 1) | bit
        out.append("1" if bit else "0")
        k += 1
    return "".join(out)


def subinterval_codeword(iv: CodeInterval) -> str:
    """Shortest ``w`` whose dyadic interval ``[0.w, 0.w + 2**-|w|]`` fits inside ``iv``.

    Among words of that length the smallest value wins.
    """
    lo, hi, den = _common(iv)
    # 2**-k <= high - low is necessary, so start from the largest k ruled out by it
    k = max(0, (den // (hi - lo)).bit_length() - 1)
    while True:
        j = -((-lo << k) // den)
        if (j + 1) * den <= hi << k:
            return format(j, f"0{k}b") if k else ""
        k += 1
