"""Exact arithmetic in the real quadratic field Q(sqrt(q)).

A value is a pair of rationals (rat, irr) representing rat + irr*sqrt(q).
For prime q (never a perfect square) this representation is unique, so
equality is exact componentwise comparison and no tolerance enters any
identity built from these values.  Sums of L-values at the critical point
and their integer powers live here.
"""

from __future__ import annotations

from fractions import Fraction
from functools import total_ordering
from numbers import Rational
from typing import Union

import mpmath

_Scalar = Union[int, Fraction]


@total_ordering
class SqrtQ:
    """rat + irr*sqrt(q) with exact Fraction components."""

    __slots__ = ("q", "rat", "irr")

    def __init__(self, q: int, rat: _Scalar = 0, irr: _Scalar = 0) -> None:
        self.q = q
        self.rat = Fraction(rat)
        self.irr = Fraction(irr)

    # -- construction helpers ------------------------------------------------

    @classmethod
    def zero(cls, q: int) -> "SqrtQ":
        return cls(q, 0, 0)

    @classmethod
    def one(cls, q: int) -> "SqrtQ":
        return cls(q, 1, 0)

    @classmethod
    def sqrt(cls, q: int) -> "SqrtQ":
        return cls(q, 0, 1)

    def _coerce(self, other) -> "SqrtQ":
        if isinstance(other, SqrtQ):
            if other.q != self.q:
                raise ValueError(f"mixed fields: sqrt({self.q}) vs sqrt({other.q})")
            return other
        if isinstance(other, Rational):
            return SqrtQ(self.q, other, 0)
        return NotImplemented  # type: ignore[return-value]

    # -- ring operations -----------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return SqrtQ(self.q, self.rat + o.rat, self.irr + o.irr)

    __radd__ = __add__

    def __neg__(self) -> "SqrtQ":
        return SqrtQ(self.q, -self.rat, -self.irr)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return SqrtQ(
            self.q,
            self.rat * o.rat + self.q * self.irr * o.irr,
            self.rat * o.irr + self.irr * o.rat,
        )

    __rmul__ = __mul__

    def conjugate(self) -> "SqrtQ":
        return SqrtQ(self.q, self.rat, -self.irr)

    def norm(self) -> Fraction:
        """Field norm rat^2 - q*irr^2 (a rational)."""
        return self.rat * self.rat - self.q * self.irr * self.irr

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt q)")
        inv = o.conjugate()
        return SqrtQ(self.q, self.rat, self.irr) * SqrtQ(
            self.q, inv.rat / n, inv.irr / n
        )

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o / self

    def __pow__(self, e: int) -> "SqrtQ":
        if not isinstance(e, int) or e < 0:
            raise ValueError("only nonnegative integer powers are exact")
        out = SqrtQ.one(self.q)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    # -- comparisons and conversion -------------------------------------------

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.rat == o.rat and self.irr == o.irr

    def __lt__(self, other) -> bool:
        # sign of (self - other) = sign of rat + irr*sqrt(q), decided exactly
        o = self._coerce(other)
        diff = self - o
        a, b = diff.rat, diff.irr
        if b == 0:
            return a < 0
        if a == 0:
            return b < 0
        if a < 0 and b < 0:
            return True
        if a > 0 and b > 0:
            return False
        # opposite signs: compare a^2 against q b^2 (sign set by the larger)
        if a > 0:  # b < 0: negative iff q b^2 > a^2
            return self.q * b * b > a * a
        return self.q * b * b < a * a  # a < 0, b > 0

    def __hash__(self) -> int:
        return hash((self.q, self.rat, self.irr))

    def is_rational(self) -> bool:
        return self.irr == 0

    def __float__(self) -> float:
        return float(self.rat) + float(self.irr) * float(self.q) ** 0.5

    def to_mpf(self, prec: int = 192) -> mpmath.mpf:
        """High-precision float value at the given binary precision."""
        with mpmath.workprec(prec):
            return mpmath.mpf(self.rat.numerator) / self.rat.denominator + (
                mpmath.mpf(self.irr.numerator) / self.irr.denominator
            ) * mpmath.sqrt(self.q)

    def __repr__(self) -> str:
        return f"SqrtQ({self.q}, {self.rat}, {self.irr})"

    def __str__(self) -> str:
        return f"{self.rat} + {self.irr}*sqrt({self.q})"

    # -- serialization ---------------------------------------------------------

    def to_strings(self) -> tuple[str, str]:
        """Canonical fraction strings (rat, irr) for caches and CSV."""
        return str(self.rat), str(self.irr)

    @classmethod
    def from_strings(cls, q: int, rat: str, irr: str) -> "SqrtQ":
        return cls(q, Fraction(rat), Fraction(irr))
