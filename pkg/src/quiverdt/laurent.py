"""Laurent polynomials in the line element s."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping


class LaurentInS:
    """Finitely supported map exponent -> rational coefficient."""

    __slots__ = ("terms", "var")

    def __init__(self, terms: Mapping[int, object] | None = None, var: str = "s"):
        clean: dict[int, Fraction] = {}
        for e, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                clean[int(e)] = clean.get(int(e), Fraction(0)) + c
        self.terms = {e: c for e, c in sorted(clean.items()) if c}
        self.var = var

    @classmethod
    def constant(cls, c, var: str = "s") -> "LaurentInS":
        return cls({0: c}, var)

    @classmethod
    def monomial(cls, e: int, c=1, var: str = "s") -> "LaurentInS":
        return cls({e: c}, var)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, object]], var: str = "s") -> "LaurentInS":
        out: dict[int, Fraction] = {}
        for e, c in pairs:
            out[e] = out.get(e, Fraction(0)) + Fraction(c)
        return cls(out, var)

    def _lift(self, other) -> "LaurentInS":
        if isinstance(other, LaurentInS):
            return other
        return LaurentInS.constant(other, self.var)

    def __add__(self, other):
        o = self._lift(other)
        out = dict(self.terms)
        for e, c in o.terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return LaurentInS(out, self.var)

    __radd__ = __add__

    def __neg__(self):
        return LaurentInS({e: -c for e, c in self.terms.items()}, self.var)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        out: dict[int, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                out[e1 + e2] = out.get(e1 + e2, Fraction(0)) + c1 * c2
        return LaurentInS(out, self.var)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, LaurentInS):
            if len(other.terms) != 1:
                raise ZeroDivisionError("only division by a monomial stays Laurent")
            (e, c), = other.terms.items()
            return LaurentInS({k - e: v / c for k, v in self.terms.items()}, self.var)
        return LaurentInS({e: c / Fraction(other) for e, c in self.terms.items()}, self.var)

    def __pow__(self, n: int):
        if n < 0:
            if len(self.terms) != 1:
                raise ZeroDivisionError("negative powers only of monomials")
            (e, c), = self.terms.items()
            return LaurentInS({e * n: c**n}, self.var)
        out = LaurentInS.constant(1, self.var)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, LaurentInS):
            return self.terms == other.terms
        try:
            return self.terms == LaurentInS.constant(other).terms
        except (TypeError, ValueError):
            return False

    def __hash__(self):
        return hash(tuple(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def exact_div(self, other: "LaurentInS") -> "LaurentInS":
        """Quotient by another Laurent polynomial; raises ArithmeticError if it leaves a remainder."""
        if other.is_zero():
            raise ZeroDivisionError("division by zero")
        rem = dict(self.terms)
        lo_d, hi_d = other.span()
        lead = other.terms[hi_d]
        quot: dict[int, Fraction] = {}
        while rem:
            e = max(rem) - hi_d
            if min(rem) > lo_d + e:
                raise ArithmeticError(f"{self} is not divisible by {other}")
            c = rem[max(rem)] / lead
            quot[e] = c
            for k, v in other.terms.items():
                nv = rem.get(k + e, Fraction(0)) - c * v
                if nv:
                    rem[k + e] = nv
                else:
                    rem.pop(k + e, None)
        return LaurentInS(quot, self.var)

    def adams(self, n: int) -> "LaurentInS":
        return LaurentInS({e * n: c for e, c in self.terms.items()}, self.var)

    def evaluate(self, x):
        """Value at x (an int, Fraction or QuadNum); negative exponents need x invertible."""
        total = 0
        for e, c in self.terms.items():
            total = total + (x**e) * c if e else total + c
        return total

    def at_one(self) -> Fraction:
        return sum(self.terms.values(), Fraction(0))

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.terms.values())

    def is_palindromic(self) -> bool:
        return all(self.terms.get(-e) == c for e, c in self.terms.items())

    def is_nonnegative(self) -> bool:
        return all(c > 0 for c in self.terms.values())

    def span(self) -> tuple[int, int] | None:
        if not self.terms:
            return None
        return min(self.terms), max(self.terms)

    def pairs(self) -> list[list]:
        return [[e, _num(c)] for e, c in self.terms.items()]

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(str(_num(c)) if e == 0 else f"{_num(c)}*{self.var}^{e}" for e, c in self.terms.items())

    def __repr__(self) -> str:
        return f"LaurentInS({str(self)!r})"


def _num(c: Fraction):
    return int(c) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
