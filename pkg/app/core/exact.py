"""Exact arithmetic for amplitudes m/sqrt(2)^t and dyadic probabilities.

Every amplitude reachable with {H, X, CCX} from |0...0> has the form
m / sqrt(2)^t with integer m, and every measurement probability is a
dyadic rational m / 2^e. Both are kept in canonical form so that equality
is structural. Thresholds that are not dyadic (2/3, 25/27, ...) are plain
``fractions.Fraction`` values; comparisons cross-multiply integers.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import total_ordering
from typing import Union

import numpy as np

Rational = Fraction
"""Exact threshold type (c, s, s', ...)."""

Number = Union["Dyadic", Fraction, int]

_DYADIC_RE = re.compile(r"^\s*(-?\d+)\s*/\s*2\^(\d+)\s*$")
_RATIONAL_RE = re.compile(r"^\s*(-?\d+)\s*(?:/\s*(\d+))?\s*$")


class ParityMismatchError(ValueError):
    """Amplitudes with half-exponents of different parity were added."""


class ExactFormatError(ValueError):
    """A dyadic or rational literal could not be parsed or represented."""


class Ordering(Enum):
    """Three-way comparison result."""

    LESS = -1
    EQUAL = 0
    GREATER = 1


def _trailing_zeros(n: int) -> int:
    return (n & -n).bit_length() - 1


@total_ordering
@dataclass(frozen=True, eq=False)
class Dyadic:
    """Canonical dyadic rational num / 2^exp.

    Canonical: num odd or exp == 0; zero is (0, 0).
    """

    num: int
    exp: int = 0

    def __post_init__(self) -> None:
        if self.exp < 0:
            raise ValueError(f"Dyadic exponent must be nonnegative, got {self.exp}")
        num, exp = self.num, self.exp
        if num == 0:
            exp = 0
        elif exp > 0:
            shift = min(_trailing_zeros(num), exp)
            num >>= shift
            exp -= shift
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "exp", exp)

    @classmethod
    def from_fraction(cls, value: Union[Fraction, int]) -> Dyadic:
        """Convert a Fraction whose denominator is a power of two."""
        value = Fraction(value)
        den = value.denominator
        if den & (den - 1):
            raise ExactFormatError(f"{value} is not dyadic")
        return cls(value.numerator, den.bit_length() - 1)

    @classmethod
    def parse(cls, text: str) -> Dyadic:
        """Parse the serialized form ``<num>/2^<exp>``."""
        match = _DYADIC_RE.match(text)
        if match is None:
            raise ExactFormatError(f"not a dyadic literal: {text!r}")
        return cls(int(match.group(1)), int(match.group(2)))

    def to_fraction(self) -> Fraction:
        return Fraction(self.num, 1 << self.exp)

    def to_amp(self) -> Amp:
        """The same value as an amplitude: m/2^e = m/sqrt(2)^(2e)."""
        return Amp(self.num, 2 * self.exp)

    def numerator_at(self, exp: int) -> int:
        """Numerator over 2^exp; exp must be at least the canonical exponent."""
        if exp < self.exp:
            raise ExactFormatError(f"{self} has no integer numerator over 2^{exp}")
        return self.num << (exp - self.exp)

    def approx(self) -> float:
        return float(self.to_fraction())

    def __str__(self) -> str:
        return f"{self.num}/2^{self.exp}"

    def __repr__(self) -> str:
        return f"Dyadic({self.num}, {self.exp})"

    def __hash__(self) -> int:
        return hash(self.to_fraction())

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Dyadic):
            return self.num == other.num and self.exp == other.exp
        if isinstance(other, (int, Fraction)):
            return self.to_fraction() == other
        return NotImplemented

    def __lt__(self, other: Number) -> bool:
        if not isinstance(other, (Dyadic, Fraction, int)):
            return NotImplemented
        return dyadic_cmp(self, other) is Ordering.LESS

    def __add__(self, other: Number) -> Number:
        if isinstance(other, int):
            other = Dyadic(other)
        if isinstance(other, Dyadic):
            exp = max(self.exp, other.exp)
            return Dyadic(self.numerator_at(exp) + other.numerator_at(exp), exp)
        if isinstance(other, Fraction):
            return self.to_fraction() + other
        return NotImplemented

    __radd__ = __add__

    def __neg__(self) -> Dyadic:
        return Dyadic(-self.num, self.exp)

    def __sub__(self, other: Number) -> Number:
        if isinstance(other, (Dyadic, Fraction, int)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other: Number) -> Number:
        return (-self) + other

    def __mul__(self, other: Number) -> Number:
        if isinstance(other, int):
            return Dyadic(self.num * other, self.exp)
        if isinstance(other, Dyadic):
            return Dyadic(self.num * other.num, self.exp + other.exp)
        if isinstance(other, Fraction):
            return self.to_fraction() * other
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, power: int) -> Dyadic:
        if power < 0:
            raise ValueError("negative powers leave the dyadic ring")
        return Dyadic(self.num**power, self.exp * power)


ZERO = Dyadic(0)
ONE = Dyadic(1)
HALF = Dyadic(1, 1)


@dataclass(frozen=True)
class Amp:
    """Canonical amplitude num / sqrt(2)^half_exp.

    Canonical: while half_exp >= 2 and num is even, (num, t) -> (num/2, t-2);
    zero is (0, 0).
    """

    num: int
    half_exp: int = 0

    def __post_init__(self) -> None:
        if self.half_exp < 0:
            raise ValueError(f"half_exp must be nonnegative, got {self.half_exp}")
        num, t = self.num, self.half_exp
        if num == 0:
            t = 0
        else:
            shift = min(_trailing_zeros(num), t // 2)
            num >>= shift
            t -= 2 * shift
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "half_exp", t)

    def __add__(self, other: Amp) -> Amp:
        return amp_add(self, other)

    def __sub__(self, other: Amp) -> Amp:
        return amp_add(self, -other)

    def __mul__(self, other: Amp) -> Amp:
        return amp_mul(self, other)

    def __neg__(self) -> Amp:
        return Amp(-self.num, self.half_exp)

    def norm_sq(self) -> Dyadic:
        return amp_norm_sq(self)

    def approx(self) -> float:
        """Float value, for sanity cross-checks only."""
        whole = float(Fraction(self.num, 1 << (self.half_exp // 2)))
        return whole * float(np.sqrt(0.5)) if self.half_exp % 2 else whole

    def __str__(self) -> str:
        return f"{self.num}/sqrt2^{self.half_exp}"


def amp_add(a: Amp, b: Amp) -> Amp:
    """Exact sum. Both operands must share half-exponent parity.

    Raises:
        ParityMismatchError: If the half-exponents differ in parity
            (the sum would leave Z[1/sqrt2] scaled form used by the simulator)
    """
    if a.num == 0:
        return b
    if b.num == 0:
        return a
    if (a.half_exp - b.half_exp) % 2:
        raise ParityMismatchError(
            f"cannot add {a} and {b}: half_exp parities differ"
        )
    t = max(a.half_exp, b.half_exp)
    na = a.num << ((t - a.half_exp) // 2)
    nb = b.num << ((t - b.half_exp) // 2)
    return Amp(na + nb, t)


def amp_mul(a: Amp, b: Amp) -> Amp:
    """Exact product."""
    return Amp(a.num * b.num, a.half_exp + b.half_exp)


def amp_norm_sq(a: Amp) -> Dyadic:
    """|a|^2 = num^2 / 2^half_exp."""
    return Dyadic(a.num * a.num, a.half_exp)


def to_rational(value: Number) -> Fraction:
    """Embed a Dyadic (or int) losslessly into the rationals."""
    if isinstance(value, Dyadic):
        return value.to_fraction()
    return Fraction(value)


def dyadic_cmp(a: Dyadic, b: Number) -> Ordering:
    """Exact three-way comparison by integer cross-multiplication."""
    if isinstance(b, Dyadic):
        exp = max(a.exp, b.exp)
        left, right = a.numerator_at(exp), b.numerator_at(exp)
    else:
        b = Fraction(b)
        left = a.num * b.denominator
        right = b.numerator << a.exp
    if left < right:
        return Ordering.LESS
    if left > right:
        return Ordering.GREATER
    return Ordering.EQUAL


def parse_rational(text: str) -> Fraction:
    """Parse ``num/den`` (or a bare integer) into a reduced Fraction."""
    match = _RATIONAL_RE.match(text)
    if match is None:
        raise ExactFormatError(f"not a rational literal: {text!r} (expected N/D)")
    den = int(match.group(2)) if match.group(2) is not None else 1
    if den == 0:
        raise ExactFormatError(f"zero denominator in {text!r}")
    return Fraction(int(match.group(1)), den)


def format_rational(value: Union[Fraction, int]) -> str:
    """Serialize as ``num/den``."""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def format_exact(value: Number) -> str:
    """Dyadics as ``num/2^exp``, everything else as ``num/den``."""
    if isinstance(value, Dyadic):
        return str(value)
    return format_rational(value)
