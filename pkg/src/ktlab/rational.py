"""Exact nonnegative rationals extended with infinity.

All Lebesgue exponent arithmetic goes through this type so that region
membership is decided by exact comparisons, never by floating point.
The workhorse representation is the reciprocal: ``1/inf == 0`` and
``1/0 == inf``, and every admissibility condition is a linear identity
or inequality in reciprocal space.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

RationalLike = Union[int, str, Fraction, "ExtRational"]


class ExtRational:
    """A nonnegative rational number or the distinguished value infinity.

    Immutable and hashable.  Construct from an int, a ``Fraction``, a
    string like ``"9/5"`` or ``"inf"``, or a (numerator, denominator)
    pair.
    """

    __slots__ = ("_v",)

    _v: Fraction | None  # None encodes +infinity

    def __init__(self, value: RationalLike = 0, den: int | None = None):
        if den is not None:
            v: Fraction | None = Fraction(value, den)  # type: ignore[arg-type]
        elif isinstance(value, ExtRational):
            v = value._v
        elif isinstance(value, str):
            s = value.strip().lower()
            v = None if s in ("inf", "infinity", "oo") else Fraction(s)
        elif isinstance(value, (int, Fraction)):
            v = Fraction(value)
        else:
            raise TypeError(f"cannot build ExtRational from {value!r}")
        if v is not None and v < 0:
            raise ValueError(f"ExtRational must be nonnegative, got {v}")
        object.__setattr__(self, "_v", v)

    # -- basic queries ---------------------------------------------------

    @property
    def is_inf(self) -> bool:
        return self._v is None

    @property
    def frac(self) -> Fraction:
        """The finite value as a Fraction; raises on infinity."""
        if self._v is None:
            raise ValueError("value is infinite")
        return self._v

    @property
    def inv(self) -> Fraction:
        """Exact reciprocal as a plain Fraction (0 for infinity)."""
        if self._v is None:
            return Fraction(0)
        if self._v == 0:
            raise ZeroDivisionError("reciprocal of 0 is infinite, not a Fraction")
        return 1 / self._v

    @classmethod
    def from_inv(cls, r: Fraction | int) -> "ExtRational":
        """Inverse of :attr:`inv`: build the exponent whose reciprocal is r."""
        r = Fraction(r)
        if r < 0:
            raise ValueError("reciprocal must be nonnegative")
        return INF if r == 0 else cls(1 / r)

    def reciprocal(self) -> "ExtRational":
        """1/x as an ExtRational; an exact involution with 1/inf = 0."""
        if self._v is None:
            return ExtRational(0)
        if self._v == 0:
            return INF
        return ExtRational(1 / self._v)

    # -- arithmetic (the closed fragment the classifier needs) -----------

    def __mul__(self, other: RationalLike) -> "ExtRational":
        o = other if isinstance(other, ExtRational) else ExtRational(other)
        if self.is_inf or o.is_inf:
            if (self._v == 0) or (o._v == 0):
                raise ValueError("inf * 0 is undefined")
            return INF
        return ExtRational(self._v * o._v)

    __rmul__ = __mul__

    def __add__(self, other: RationalLike) -> "ExtRational":
        o = other if isinstance(other, ExtRational) else ExtRational(other)
        if self.is_inf or o.is_inf:
            return INF
        return ExtRational(self._v + o._v)

    __radd__ = __add__

    def __truediv__(self, other: RationalLike) -> "ExtRational":
        o = other if isinstance(other, ExtRational) else ExtRational(other)
        if self.is_inf and o.is_inf:
            raise ValueError("inf / inf is undefined")
        if o.is_inf:
            return ExtRational(0)
        if o._v == 0:
            raise ZeroDivisionError("division by zero exponent")
        if self.is_inf:
            return INF
        return ExtRational(self._v / o._v)

    # -- order ------------------------------------------------------------

    def _key(self, other: RationalLike) -> tuple[Fraction | None, Fraction | None]:
        o = other if isinstance(other, ExtRational) else ExtRational(other)
        return self._v, o._v

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, (ExtRational, int, str, Fraction)):
            return NotImplemented
        a, b = self._key(other)  # type: ignore[arg-type]
        return a == b

    def __lt__(self, other: RationalLike) -> bool:
        a, b = self._key(other)
        if a == b:
            return False
        if a is None:
            return False
        if b is None:
            return True
        return a < b

    def __le__(self, other: RationalLike) -> bool:
        a, b = self._key(other)
        return a == b or self.__lt__(other)

    def __gt__(self, other: RationalLike) -> bool:
        return not self.__le__(other)

    def __ge__(self, other: RationalLike) -> bool:
        return not self.__lt__(other)

    def __hash__(self) -> int:
        return hash(("ExtRational", self._v))

    # -- conversions -------------------------------------------------------

    def __float__(self) -> float:
        return float("inf") if self._v is None else float(self._v)

    def __str__(self) -> str:
        return "inf" if self._v is None else str(self._v)

    def __repr__(self) -> str:
        return f"ExtRational({str(self)!r})"


INF = ExtRational("inf")


def ext(value: RationalLike, den: int | None = None) -> ExtRational:
    """Shorthand constructor used throughout the test and CLI layers."""
    return ExtRational(value, den)
