"""Exact numbers a + b*sqrt(q) over a fixed base q."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

Scalar = Union[int, Fraction]


def isqrt_exact(n: int) -> int | None:
    if n < 0:
        return None
    r = math.isqrt(n)
    return r if r * r == n else None


class QuadNum:
    """Element ``a + b*sqrt(base)`` with rational ``a, b``; a square base folds into ``a``."""

    __slots__ = ("base", "a", "b")

    def __init__(self, base: int, a: Scalar = 0, b: Scalar = 0):
        self.base = int(base)
        a, b = Fraction(a), Fraction(b)
        root = isqrt_exact(self.base)
        if root is not None:
            a, b = a + b * root, Fraction(0)
        self.a = a
        self.b = b

    @classmethod
    def sqrt(cls, base: int, sign: int = 1) -> "QuadNum":
        return cls(base, 0, sign)

    def _coerce(self, other) -> "QuadNum":
        if isinstance(other, QuadNum):
            if other.base != self.base:
                raise ValueError(f"mixing bases {self.base} and {other.base}")
            return other
        return QuadNum(self.base, other, 0)

    def __add__(self, other):
        o = self._coerce(other)
        return QuadNum(self.base, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return QuadNum(self.base, -self.a, -self.b)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        return QuadNum(self.base, self.a * o.a + self.base * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return self.a * self.a - self.base * self.b * self.b

    def inverse(self) -> "QuadNum":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("QuadNum inverse of zero")
        return QuadNum(self.base, self.a / n, -self.b / n)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = QuadNum(self.base, 1)
        x = self
        while n:
            if n & 1:
                result = result * x
            x = x * x
            n >>= 1
        return result

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except ValueError:
            return False
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash((self.base, self.a, self.b))

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        return f"QuadNum({self.base}, {self.a}, {self.b})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        return f"{self.a} + {self.b}*sqrt({self.base})"
