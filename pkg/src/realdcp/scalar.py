"""Exact arithmetic in the quadratic field Q(sqrt 5)."""

from __future__ import annotations

from fractions import Fraction
from typing import Union

Number = Union[int, Fraction, "Scalar"]


class Scalar:
    """An element ``a + b*sqrt(5)`` with rational ``a`` and ``b``.

    Instances are immutable and hashable. Mixed arithmetic with ``int`` and
    ``Fraction`` is supported on both sides.
    """

    __slots__ = ("a", "b")

    def __init__(self, a: int | Fraction | str = 0, b: int | Fraction | str = 0):
        object.__setattr__(self, "a", Fraction(a))
        object.__setattr__(self, "b", Fraction(b))

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    @staticmethod
    def coerce(x: Number) -> Scalar:
        if isinstance(x, Scalar):
            return x
        if isinstance(x, (int, Fraction)):
            return Scalar(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to Scalar")

    @classmethod
    def parse(cls, text: str) -> Scalar:
        """Parse ``"p/q"``, ``"p/q*r5"`` or ``"p/q + r/s*r5"`` (``r5`` = sqrt 5)."""
        s = text.replace(" ", "")
        if not s:
            raise ValueError("empty scalar")
        a = Fraction(0)
        b = Fraction(0)
        # split on + / - that are not at the start or after '/' or '*'
        parts = []
        start = 0
        for k in range(1, len(s)):
            if s[k] in "+-" and s[k - 1] not in "/*":
                parts.append(s[start:k])
                start = k
        parts.append(s[start:])
        for part in parts:
            if part.endswith("r5"):
                coef = part[:-2].rstrip("*")
                if coef in ("", "+"):
                    b += 1
                elif coef == "-":
                    b -= 1
                else:
                    b += Fraction(coef)
            else:
                a += Fraction(part)
        return cls(a, b)

    def is_rational(self) -> bool:
        return self.b == 0

    def conjugate(self) -> Scalar:
        return Scalar(self.a, -self.b)

    def norm(self) -> Fraction:
        """Field norm ``a^2 - 5 b^2``; zero only for the zero element."""
        return self.a * self.a - 5 * self.b * self.b

    def sign(self) -> int:
        """Sign of the real number ``a + b*sqrt(5)``, computed exactly."""
        a, b = self.a, self.b
        if b == 0:
            return (a > 0) - (a < 0)
        if a == 0:
            return (b > 0) - (b < 0)
        if (a > 0) == (b > 0):
            return 1 if a > 0 else -1
        # opposite signs: compare a^2 with 5 b^2
        if a * a > 5 * b * b:
            return 1 if a > 0 else -1
        return 1 if b > 0 else -1

    def __bool__(self) -> bool:
        return self.a != 0 or self.b != 0

    def __eq__(self, other) -> bool:
        if isinstance(other, Scalar):
            return self.a == other.a and self.b == other.b
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self) -> int:
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b))

    def __lt__(self, other) -> bool:
        return (self - other).sign() < 0

    def __le__(self, other) -> bool:
        return (self - other).sign() <= 0

    def __gt__(self, other) -> bool:
        return (self - other).sign() > 0

    def __ge__(self, other) -> bool:
        return (self - other).sign() >= 0

    def __neg__(self) -> Scalar:
        return Scalar(-self.a, -self.b)

    def __pos__(self) -> Scalar:
        return self

    def __add__(self, other) -> Scalar:
        try:
            o = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        return Scalar(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other) -> Scalar:
        try:
            o = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        return Scalar(self.a - o.a, self.b - o.b)

    def __rsub__(self, other) -> Scalar:
        return Scalar.coerce(other) - self

    def __mul__(self, other) -> Scalar:
        try:
            o = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        return Scalar(self.a * o.a + 5 * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def inverse(self) -> Scalar:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero Scalar")
        return Scalar(self.a / n, -self.b / n)

    def __truediv__(self, other) -> Scalar:
        try:
            o = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other) -> Scalar:
        return Scalar.coerce(other) * self.inverse()

    def __repr__(self) -> str:
        return f"Scalar({str(self)!r})"

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a)
        sb = "r5" if self.b == 1 else "-r5" if self.b == -1 else f"{self.b}*r5"
        if self.a == 0:
            return sb
        if sb.startswith("-"):
            return f"{self.a}{sb}"
        return f"{self.a}+{sb}"


SQRT5 = Scalar(0, 1)
# golden ratio (1 + sqrt 5)/2 and its inverse (sqrt 5 - 1)/2
PHI = Scalar(Fraction(1, 2), Fraction(1, 2))
PHI_INV = Scalar(Fraction(-1, 2), Fraction(1, 2))
