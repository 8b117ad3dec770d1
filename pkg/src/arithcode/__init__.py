"""Exact binary arithmetic coding and the moment analysis of its output interval."""

from .codec import (
    CodeInterval,
    EncodeResult,
    decode,
    encode,
    encode_interval,
    first_disagreement_codeword,
    midpoint_codeword,
    subinterval_codeword,
)
from .exact import DomainError, binary_expansion, dyadic_value, parse_rational
from .linalg import RationalMatrix

__version__ = "0.1.0"
