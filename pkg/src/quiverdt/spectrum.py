"""Spectra of quasi-homogeneous isolated singularities and refined GV polynomials."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import prod
from typing import Mapping, Sequence

from .errors import ArgumentError
from .jacobi import DEFAULT_NMAX, milnor_basis
from .laurent import LaurentInS
from .polys import CommPoly


@dataclass(frozen=True)
class SpectrumTable:
    spectral_numbers: tuple[Fraction, ...]
    n_vars: int

    @property
    def mu(self) -> int:
        return len(self.spectral_numbers)

    def is_symmetric(self) -> bool:
        return Counter(self.spectral_numbers) == Counter(self.n_vars - a for a in self.spectral_numbers)


@dataclass(frozen=True)
class BivariatePoly:
    """Sum of c * z1^a * z2^b with rational a, b and a + b an integer."""

    terms: Mapping[tuple[Fraction, Fraction], int] = field(default_factory=dict)

    def __post_init__(self):
        clean: dict[tuple[Fraction, Fraction], int] = {}
        for (a, b), c in self.terms.items():
            a, b = Fraction(a), Fraction(b)
            if (a + b).denominator != 1:
                raise ArgumentError(f"exponent pair ({a}, {b}) does not sum to an integer")
            if c:
                clean[(a, b)] = clean.get((a, b), 0) + int(c)
        object.__setattr__(self, "terms", {k: v for k, v in sorted(clean.items()) if v})

    def swapped(self) -> "BivariatePoly":
        return BivariatePoly({(b, a): c for (a, b), c in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*z1^({a})*z2^({b})" for (a, b), c in self.terms.items())

    def pairs(self) -> list[list]:
        return [[_frac(a), _frac(b), c] for (a, b), c in self.terms.items()]


def _frac(x: Fraction):
    return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def steenbrink_spectrum(weights: Sequence[int], degree: int, f: CommPoly | str | None = None,
                        N_max: int = DEFAULT_NMAX) -> SpectrumTable:
    """Spectrum alpha = sum_i (l_i + 1) w_i / d over a monomial basis x^l of the Jacobian ring.

    Without ``f`` the singularity is the diagonal form sum x_i^{d/w_i}. With ``f`` the basis
    comes from the truncated elimination of its Jacobian ideal.
    """
    w = [int(x) for x in weights]
    d = int(degree)
    if not 1 <= len(w) <= 2:
        raise ArgumentError("spectra are supported in one or two variables")
    if any(x <= 0 for x in w) or d <= 0:
        raise ArgumentError("weights and degree must be positive")
    if f is None:
        if any(d % x for x in w):
            raise ArgumentError(f"degree {d} is not a multiple of every weight {w}; no diagonal form")
        if any(d == x for x in w):
            return SpectrumTable((), len(w))  # smooth: a linear term
        ranges = [range(d // x - 1) for x in w]
        basis = list(product(*ranges))
        expected = prod(d // x - 1 for x in w)
        assert len(basis) == expected
    else:
        if isinstance(f, str):
            f = CommPoly.parse(f)
        if f.nvars != len(w):
            raise ArgumentError("weight count does not match the number of variables")
        for mono in f.terms:
            if sum(e * x for e, x in zip(mono, w)) != d:
                raise ArgumentError(f"{f} is not homogeneous of degree {d} for weights {w}")
        found = milnor_basis(f, N_max)
        if found is None:
            raise ArgumentError(f"{f} does not have an isolated singularity (within degree {N_max})")
        basis = found
    alphas = sorted(Fraction(sum((l + 1) * x for l, x in zip(mono, w)), d) for mono in basis)
    return SpectrumTable(tuple(alphas), len(w))


def poly_weights(f: CommPoly, max_degree: int = 720) -> tuple[list[int], int] | None:
    """Smallest-degree positive integer weights making f quasi-homogeneous, or None."""
    from .ncalg import _search_weights

    rows = [list(m) for m in f.terms]
    if not rows:
        return None
    for d in range(1, max_degree + 1):
        w = _search_weights(rows, f.nvars, d)
        if w is not None:
            return w, d
    return None


def polynomial_spectrum(f: CommPoly | str, N_max: int = DEFAULT_NMAX) -> SpectrumTable:
    """Spectrum of a quasi-homogeneous polynomial with detected weights."""
    if isinstance(f, str):
        f = CommPoly.parse(f)
    found = poly_weights(f)
    if found is None:
        raise ArgumentError(f"{f} is not quasi-homogeneous")
    w, d = found
    return steenbrink_spectrum(w, d, f, N_max)


def refined_gv_poly(S: SpectrumTable, n_vars: int | None = None) -> BivariatePoly:
    """sum over alpha of z1^{alpha - n/2} z2^{n/2 - alpha}."""
    n = S.n_vars if n_vars is None else n_vars
    half = Fraction(n, 2)
    terms: dict[tuple[Fraction, Fraction], int] = {}
    for a in S.spectral_numbers:
        key = (a - half, half - a)
        terms[key] = terms.get(key, 0) + 1
    return BivariatePoly(terms)


def specialize(P: BivariatePoly, mode: str):
    """``wtm``: z1 = z2 = q^{1/2}, a Laurent polynomial in q^{1/2}; ``chi``: z1 = z2 = 1."""
    if mode == "chi":
        return sum(P.terms.values())
    if mode == "wtm":
        out: dict[int, int] = {}
        for (a, b), c in P.terms.items():
            e = int(a + b)
            out[e] = out.get(e, 0) + c
        return LaurentInS(out, var="q^(1/2)")
    raise ArgumentError(f"unknown specialisation {mode!r}; use 'wtm' or 'chi'")
