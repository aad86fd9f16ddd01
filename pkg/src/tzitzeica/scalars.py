"""Exact arithmetic in the number field Q(i, sqrt(2))."""

from __future__ import annotations

from fractions import Fraction
from typing import Union

Rat = Union[int, Fraction]


class Scalar:
    """An element a + b*i + c*sqrt2 + d*i*sqrt2 with rational a, b, c, d.

    Arithmetic is exact; i^2 = -1 and sqrt2^2 = 2 hold as ring identities.
    Instances are immutable and hashable.
    """

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a: Rat = 0, b: Rat = 0, c: Rat = 0, d: Rat = 0):
        object.__setattr__(self, "a", Fraction(a))
        object.__setattr__(self, "b", Fraction(b))
        object.__setattr__(self, "c", Fraction(c))
        object.__setattr__(self, "d", Fraction(d))

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    @staticmethod
    def coerce(x) -> "Scalar":
        if isinstance(x, Scalar):
            return x
        if isinstance(x, (int, Fraction)):
            return Scalar(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to Scalar")

    def __add__(self, other):
        if not isinstance(other, (Scalar, int, Fraction)):
            return NotImplemented
        o = Scalar.coerce(other)
        return Scalar(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, (Scalar, int, Fraction)):
            return NotImplemented
        o = Scalar.coerce(other)
        return Scalar(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)

    def __rsub__(self, other):
        return Scalar.coerce(other) - self

    def __neg__(self):
        return Scalar(-self.a, -self.b, -self.c, -self.d)

    def __mul__(self, other):
        if not isinstance(other, (Scalar, int, Fraction)):
            return NotImplemented
        o = Scalar.coerce(other)
        a1, b1, c1, d1 = self.a, self.b, self.c, self.d
        a2, b2, c2, d2 = o.a, o.b, o.c, o.d
        # rational operands dominate in practice; skip the full product table
        if not (b1 or c1 or d1):
            return Scalar(a1 * a2, a1 * b2, a1 * c2, a1 * d2)
        if not (b2 or c2 or d2):
            return Scalar(a1 * a2, b1 * a2, c1 * a2, d1 * a2)
        return Scalar(
            a1 * a2 - b1 * b2 + 2 * (c1 * c2 - d1 * d2),
            a1 * b2 + b1 * a2 + 2 * (c1 * d2 + d1 * c2),
            a1 * c2 + c1 * a2 - b1 * d2 - d1 * b2,
            a1 * d2 + d1 * a2 + b1 * c2 + c1 * b2,
        )

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if self.is_zero():
            raise ZeroDivisionError("Scalar inverse of zero")
        # Multiply by the three nontrivial Galois conjugates; the product of
        # all four lies in Q.
        num = self.conj_i() * self.conj_s2() * self.conj_i().conj_s2()
        norm = self * num
        assert norm.b == 0 and norm.c == 0 and norm.d == 0
        inv = Fraction(1) / norm.a
        return Scalar(num.a * inv, num.b * inv, num.c * inv, num.d * inv)

    def __truediv__(self, other):
        return self * Scalar.coerce(other).inverse()

    def __rtruediv__(self, other):
        return Scalar.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = Scalar(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conjugate(self) -> "Scalar":
        """Complex conjugation: i -> -i."""
        return Scalar(self.a, -self.b, self.c, -self.d)

    conj_i = conjugate

    def conj_s2(self) -> "Scalar":
        """Galois conjugation sqrt2 -> -sqrt2."""
        return Scalar(self.a, self.b, -self.c, -self.d)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0 and self.c == 0 and self.d == 0

    def is_rational(self) -> bool:
        return self.b == 0 and self.c == 0 and self.d == 0

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        try:
            o = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        return (self.a, self.b, self.c, self.d) == (o.a, o.b, o.c, o.d)

    def __hash__(self):
        return hash((self.a, self.b, self.c, self.d))

    def numeric(self) -> complex:
        s2 = 2 ** 0.5
        return complex(float(self.a) + float(self.c) * s2,
                       float(self.b) + float(self.d) * s2)

    def components(self):
        return (self.a, self.b, self.c, self.d)

    def __repr__(self):
        return f"Scalar({self.a}, {self.b}, {self.c}, {self.d})"


ZERO = Scalar(0)
ONE = Scalar(1)
I = Scalar(0, 1)
SQRT2 = Scalar(0, 0, 1)
ISQRT2 = Scalar(0, 0, 0, 1)      # sqrt(-2) in the convention of this package
HALF = Scalar(Fraction(1, 2))
# 1/sqrt2 = sqrt2/2 and i/sqrt2 = i*sqrt2/2
INV_SQRT2 = Scalar(0, 0, Fraction(1, 2))
I_INV_SQRT2 = Scalar(0, 0, 0, Fraction(1, 2))
