"""Commutative polynomials with exact rational coefficients."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

Monomial = tuple[int, ...]


@dataclass(frozen=True)
class CommPoly:
    variables: tuple[str, ...]
    terms: Mapping[Monomial, Fraction] = field(default_factory=dict)

    def __post_init__(self) -> None:
        clean: dict[Monomial, Fraction] = {}
        for mono, c in self.terms.items():
            if len(mono) != len(self.variables):
                raise ValueError("monomial arity does not match the variable list")
            c = Fraction(c)
            if c:
                clean[tuple(mono)] = clean.get(tuple(mono), Fraction(0)) + c
        object.__setattr__(self, "terms", {m: c for m, c in sorted(clean.items()) if c})

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def is_zero(self) -> bool:
        return not self.terms

    def min_degree(self) -> int:
        return min((sum(m) for m in self.terms), default=0)

    def derivative(self, i: int) -> "CommPoly":
        out: dict[Monomial, Fraction] = {}
        for mono, c in self.terms.items():
            if mono[i]:
                lowered = mono[:i] + (mono[i] - 1,) + mono[i + 1:]
                out[lowered] = out.get(lowered, Fraction(0)) + c * mono[i]
        return CommPoly(self.variables, out)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mono, c in self.terms.items():
            factors = [v if e == 1 else f"{v}^{e}" for v, e in zip(self.variables, mono) if e]
            body = "*".join(factors)
            if not body:
                parts.append(str(c))
            elif c == 1:
                parts.append(body)
            elif c == -1:
                parts.append("-" + body)
            else:
                parts.append(f"{c}*{body}")
        return " + ".join(parts).replace("+ -", "- ")

    @classmethod
    def parse(cls, text: str) -> "CommPoly":
        """Parse a polynomial such as ``x^3 + x^4`` or ``x**2*y**2``."""
        import sympy

        expr = sympy.sympify(text.replace("^", "**"))
        syms = sorted(expr.free_symbols, key=lambda s: s.name)
        if not syms:
            raise ValueError("polynomial has no variables")
        poly = sympy.Poly(sympy.expand(expr), *syms)
        terms = {}
        for mono, c in poly.terms():
            terms[tuple(int(e) for e in mono)] = Fraction(int(c.p), int(c.q))
        return cls(tuple(s.name for s in syms), terms)
