"""Graded power series over dimension vectors, Adams operations, plethystic Exp and Log.

Two carriers are supported. In the symbolic carrier coefficients are Laurent polynomials
in the line element s and Adams operations act by s -> s^n. In the numeric carrier
coefficients are exact numbers a + b*sqrt(q) for one field size q; Adams operations then
cannot be computed from the numbers alone and are supplied by a callback, either from a
recount at q^n or from already known invariants.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import factorial
from typing import Callable, Iterable, Mapping

import sympy

from .errors import ArgumentError, InterpolationError
from .laurent import LaurentInS
from .numbers import QuadNum, isqrt_exact

DimVec = tuple[int, ...]
SYMBOLIC = "symbolic"
NUMERIC = "numeric"

# psi(n, delta, value) -> value of psi_n applied to the t^delta coefficient (lands on t^{n delta})
CoeffAdams = Callable[[int, DimVec, object], object]


def dimvecs(nvert: int, G: int, include_zero: bool = False) -> list[DimVec]:
    """All dimension vectors with total at most G, ordered by total then lexicographically."""
    out = [g for g in product(range(G + 1), repeat=nvert) if sum(g) <= G]
    if not include_zero:
        out = [g for g in out if any(g)]
    return sorted(out, key=lambda g: (sum(g), g))


@dataclass
class GradedSeries:
    nvert: int
    G: int
    coeffs: dict[DimVec, object] = field(default_factory=dict)
    carrier: str = SYMBOLIC
    base: int | None = None

    def __post_init__(self):
        if self.carrier not in (SYMBOLIC, NUMERIC):
            raise ArgumentError(f"unknown carrier {self.carrier!r}")
        if self.carrier == NUMERIC and self.base is None:
            raise ArgumentError("numeric carrier needs a base field size")
        clean = {}
        for g, c in self.coeffs.items():
            g = tuple(int(x) for x in g)
            if len(g) != self.nvert or min(g, default=0) < 0:
                raise ArgumentError(f"bad dimension vector {g}")
            if sum(g) <= self.G:
                c = self.lift(c)
                if not _is_zero(c):
                    clean[g] = c
        self.coeffs = dict(sorted(clean.items(), key=lambda kv: (sum(kv[0]), kv[0])))

    # carrier plumbing
    def lift(self, c):
        if self.carrier == SYMBOLIC:
            return c if isinstance(c, LaurentInS) else LaurentInS.constant(c)
        if isinstance(c, QuadNum):
            if c.base != self.base:
                raise ArgumentError(f"coefficient over base {c.base} in a series over base {self.base}")
            return c
        return QuadNum(self.base, c)

    def zero_value(self):
        return self.lift(0)

    def like(self, coeffs: Mapping[DimVec, object]) -> "GradedSeries":
        return GradedSeries(self.nvert, self.G, dict(coeffs), self.carrier, self.base)

    @classmethod
    def one(cls, nvert: int, G: int, carrier: str = SYMBOLIC, base: int | None = None) -> "GradedSeries":
        return cls(nvert, G, {(0,) * nvert: 1}, carrier, base)

    def __getitem__(self, g) -> object:
        return self.coeffs.get(tuple(g), self.zero_value())

    @property
    def constant(self):
        return self[(0,) * self.nvert]

    def _check(self, other: "GradedSeries"):
        if (self.nvert, self.G, self.carrier, self.base) != (other.nvert, other.G, other.carrier, other.base):
            raise ArgumentError("series have different shapes or carriers")

    def __add__(self, other: "GradedSeries") -> "GradedSeries":
        self._check(other)
        out = dict(self.coeffs)
        for g, c in other.coeffs.items():
            out[g] = out[g] + c if g in out else c
        return self.like(out)

    def __neg__(self):
        return self.like({g: -c for g, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "GradedSeries":
        c = self.lift(c)
        return self.like({g: v * c for g, v in self.coeffs.items()})

    def __mul__(self, other: "GradedSeries") -> "GradedSeries":
        self._check(other)
        out: dict[DimVec, object] = {}
        for g1, c1 in self.coeffs.items():
            s1 = sum(g1)
            for g2, c2 in other.coeffs.items():
                if s1 + sum(g2) > self.G:
                    continue
                g = tuple(a + b for a, b in zip(g1, g2))
                v = c1 * c2
                out[g] = out[g] + v if g in out else v
        return self.like(out)

    def __eq__(self, other):
        if not isinstance(other, GradedSeries):
            return NotImplemented
        return (self.nvert, self.G, self.carrier, self.base) == (other.nvert, other.G, other.carrier, other.base) \
            and self.coeffs == other.coeffs

    def without_constant(self) -> "GradedSeries":
        return self.like({g: c for g, c in self.coeffs.items() if any(g)})


def _is_zero(c) -> bool:
    return c.is_zero() if hasattr(c, "is_zero") else c == 0


# -- Adams operations --------------------------------------------------------------------

def symbolic_psi(n: int, delta: DimVec, value):
    return value.adams(n)


def rebase(value: QuadNum, base: int) -> QuadNum:
    """Express a number over base q^n in the carrier over base q."""
    big = value.base
    n, x = 0, 1
    while x < big:
        x *= base
        n += 1
    if x != big:
        raise ArgumentError(f"{big} is not a power of {base}")
    if n % 2 == 0:
        return QuadNum(base, value.a + value.b * base ** (n // 2))
    return QuadNum(base, value.a, value.b * base ** ((n - 1) // 2))


def adams(f: GradedSeries, n: int, resample: Callable[[int], GradedSeries] | None = None) -> GradedSeries:
    """psi_n: t^g -> t^{n g}, s -> s^n, q -> q^n.

    For the numeric carrier ``resample(n)`` must return the same series computed at field size
    q^n; its coefficients are moved into the base-q carrier.
    """
    if n < 1:
        raise ArgumentError("Adams operations are indexed by positive integers")
    if f.carrier == SYMBOLIC:
        return f.like({tuple(n * x for x in g): c.adams(n) for g, c in f.coeffs.items()})
    if n == 1:
        return f
    if resample is None:
        raise ArgumentError(f"psi_{n} on a numeric series needs the series at field size {f.base ** n}")
    other = resample(n)
    if other is None or other.base != f.base**n:
        raise ArgumentError(f"resampling must supply the series at field size {f.base ** n}")
    return f.like({tuple(n * x for x in g): rebase(c, f.base) for g, c in other.coeffs.items()})


def _psi_series(f: GradedSeries, n: int, psi: CoeffAdams) -> GradedSeries:
    out = {}
    for g, c in f.coeffs.items():
        if any(g) and n * sum(g) <= f.G:
            out[tuple(n * x for x in g)] = psi(n, g, c)
    return f.like(out)


def _default_psi(f: GradedSeries, psi: CoeffAdams | None) -> CoeffAdams:
    if psi is not None:
        return psi
    if f.carrier == SYMBOLIC:
        return symbolic_psi
    raise ArgumentError(f"numeric carrier over q = {f.base} needs Adams data (counts at powers of q)")


# -- exp / log -----------------------------------------------------------------------------

def ring_exp(f: GradedSeries) -> GradedSeries:
    if not _is_zero(f.constant):
        raise ArgumentError("exp needs a series without constant term")
    out = GradedSeries.one(f.nvert, f.G, f.carrier, f.base)
    power = out
    for k in range(1, f.G + 1):
        power = power * f
        out = out + power.scale(Fraction(1, factorial(k)))
    return out


def ring_log(g: GradedSeries) -> GradedSeries:
    if g.constant != g.lift(1):
        raise ArgumentError("log needs constant term 1")
    x = g.without_constant()
    out = g.like({})
    power = GradedSeries.one(g.nvert, g.G, g.carrier, g.base)
    for k in range(1, g.G + 1):
        power = power * x
        out = out + power.scale(Fraction((-1) ** (k + 1), k))
    return out


def exp_series(f: GradedSeries, psi: CoeffAdams | None = None) -> GradedSeries:
    """Plethystic exponential exp(sum_n psi_n(f)/n), truncated at total degree G."""
    if not _is_zero(f.constant):
        raise ArgumentError("plethystic Exp needs a series without constant term")
    psi = _default_psi(f, psi)
    total = f.like({})
    for n in range(1, f.G + 1):
        total = total + _psi_series(f, n, psi).scale(Fraction(1, n))
    return ring_exp(total)


def log_series(g: GradedSeries, psi: CoeffAdams | None = None) -> GradedSeries:
    """Plethystic logarithm: the F with Exp(F) = g.

    Computed by total degree from log g = sum_n psi_n(F)/n, so ``psi`` is only ever asked for
    coefficients of F that are already determined.
    """
    psi = _default_psi(g, psi)
    L = ring_log(g)
    F: dict[DimVec, object] = {}
    for gam in dimvecs(g.nvert, g.G):
        val = L[gam]
        for n in range(2, sum(gam) + 1):
            if all(x % n == 0 for x in gam):
                delta = tuple(x // n for x in gam)
                val = val - g.lift(psi(n, delta, F.get(delta, g.zero_value()))) * Fraction(1, n)
        F[gam] = val
    return g.like(F)


def resampling_psi(resample: Callable[[int], GradedSeries], base: int, level: int = 1) -> CoeffAdams:
    """Adams data for log_series from recounts: psi_n(F)_delta is Log of the series at q^n.

    ``resample(k)`` returns the series at field size base^k. Each nested Log is truncated at
    the total degree of the requested coefficient, so the recursion terminates.
    """
    series: dict[int, GradedSeries] = {}
    logs: dict[tuple[int, int], GradedSeries] = {}

    def psi(n: int, delta: DimVec, value):
        k = level * n
        top = sum(delta)
        if (k, top) not in logs:
            if k not in series:
                series[k] = resample(k)
            full = series[k]
            cut = GradedSeries(full.nvert, top, full.coeffs, full.carrier, full.base)
            logs[(k, top)] = log_series(cut, resampling_psi(resample, base, k))
        return rebase(logs[(k, top)][delta], base ** level)

    return psi


# -- interpolation ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Sample:
    """Value of an unknown Laurent polynomial at the realisation s of the line element."""

    q: int
    s: QuadNum
    value: QuadNum


def as_sample(item) -> Sample:
    if isinstance(item, Sample):
        return item
    if len(item) == 3:
        q, value, s = item
    else:
        q, value = item
        if isqrt_exact(q) is not None:
            raise ArgumentError(f"q = {q} is a square; pass the realisation of s explicitly")
        s = QuadNum.sqrt(q, -1)
    value = value if isinstance(value, QuadNum) else QuadNum(q, value)
    return Sample(q, s, value)


def interpolate_laurent(samples: Iterable, B: int, *, require_integral: bool = True,
                        spare: int = 1, var: str = "s") -> LaurentInS:
    """The Laurent polynomial with exponents in [-B, B] taking the sampled values.

    Each sample at a non-square q gives two rational equations (rational and sqrt(q) parts),
    at a square q one. The system must determine all coefficients with at least ``spare``
    equations left over as a consistency check.
    """
    samples = [as_sample(x) for x in samples]
    B = max(int(B), 0)
    exps = list(range(-B, B + 1))
    rows, rhs = [], []
    for smp in samples:
        powers = [smp.s**e for e in exps]
        rows.append([p.a for p in powers])
        rhs.append(smp.value.a)
        if isqrt_exact(smp.q) is None:
            rows.append([p.b for p in powers])
            rhs.append(smp.value.b)
        elif smp.value.b:
            raise InterpolationError(f"irrational value at square field size {smp.q}")
    unknowns = len(exps)
    if not rows:
        raise InterpolationError("no samples")
    A = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in r] for r in rows])
    b = sympy.Matrix([sympy.Rational(x.numerator, x.denominator) for x in rhs])
    rank = A.rank()
    if rank < unknowns or len(rows) < unknowns + spare:
        raise InterpolationError(
            f"{len(rows)} equations of rank {rank} cannot pin {unknowns} coefficients with {spare} to spare; "
            "sample more field sizes"
        )
    aug = A.row_join(b)
    reduced, pivots = aug.rref()
    if unknowns in pivots:
        raise InterpolationError(
            "samples are not values of one Laurent polynomial of the allowed span; "
            "the counts may not be polynomial for this congruence modulus"
        )
    coeffs = {}
    for i, col in enumerate(pivots):
        c = reduced[i, unknowns]
        coeffs[exps[col]] = Fraction(int(c.p), int(c.q))
    out = LaurentInS(coeffs, var)
    if require_integral and not out.is_integral():
        raise InterpolationError(f"non-integral coefficients {out}; check the sign convention")
    return out
