"""Potentials as cyclic words, cyclic derivatives, traces and weight detection."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Mapping, Sequence

from .errors import ArgumentError, DimensionError, InputError, UnsupportedError
from .polys import CommPoly
from .quiver import Quiver

Word = tuple[int, ...]


def canonical_rotation(word: Sequence[int]) -> Word:
    """Lexicographically least rotation of a cyclic word (arrow indices)."""
    w = tuple(word)
    return min(w[i:] + w[:i] for i in range(len(w))) if w else w


def _check_path(q: Quiver, word: Sequence[int], closed: bool) -> None:
    if not word:
        raise InputError("empty word")
    for a, b in zip(word, word[1:]):
        if q.arrows[a].target != q.arrows[b].source:
            raise InputError(
                f"word {' '.join(q.arrows[i].name for i in word)} is not composable at "
                f"{q.arrows[a].name} {q.arrows[b].name}"
            )
    if closed and q.arrows[word[-1]].target != q.arrows[word[0]].source:
        raise InputError(f"word {' '.join(q.arrows[i].name for i in word)} is not closed")


@dataclass(frozen=True)
class NcPolynomial:
    """Finite linear combination of paths; paths are tuples of arrow indices read left to right."""

    quiver: Quiver
    terms: Mapping[Word, Fraction] = field(default_factory=dict)

    def __post_init__(self) -> None:
        clean: dict[Word, Fraction] = {}
        for w, c in self.terms.items():
            c = Fraction(c)
            if c:
                _check_path(self.quiver, w, closed=False)
                clean[tuple(w)] = clean.get(tuple(w), Fraction(0)) + c
        object.__setattr__(self, "terms", {w: c for w, c in sorted(clean.items()) if c})

    def __add__(self, other: "NcPolynomial") -> "NcPolynomial":
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, Fraction(0)) + c
        return NcPolynomial(self.quiver, out)

    def named(self) -> dict[str, Fraction]:
        return {" ".join(self.quiver.arrows[i].name for i in w): c for w, c in self.terms.items()}


@dataclass(frozen=True)
class Potential:
    """Linear combination of cyclic words, each stored as its canonical rotation."""

    quiver: Quiver
    terms: Mapping[Word, Fraction] = field(default_factory=dict)

    def __post_init__(self) -> None:
        clean: dict[Word, Fraction] = {}
        for w, c in self.terms.items():
            c = Fraction(c)
            _check_path(self.quiver, w, closed=True)
            key = canonical_rotation(w)
            clean[key] = clean.get(key, Fraction(0)) + c
        object.__setattr__(self, "terms", {w: c for w, c in sorted(clean.items()) if c})

    @classmethod
    def from_named(cls, quiver: Quiver, terms: Mapping[str, Any] | Sequence[tuple[Any, str]]) -> "Potential":
        """Build from ``{"x x x": 1}`` or ``[(1, "x x x")]``; words are space separated names."""
        items = terms.items() if isinstance(terms, Mapping) else [(w, c) for c, w in terms]
        out: dict[Word, Fraction] = {}
        for w, c in items:
            word = tuple(quiver.arrow_index(n) for n in w.split())
            key = canonical_rotation(word)
            _check_path(quiver, word, closed=True)
            out[key] = out.get(key, Fraction(0)) + Fraction(c)
        return cls(quiver, out)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "Potential") -> "Potential":
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, Fraction(0)) + c
        return Potential(self.quiver, out)

    def named(self) -> dict[str, Fraction]:
        return {" ".join(self.quiver.arrows[i].name for i in w): c for w, c in self.terms.items()}

    def min_word_length(self) -> int:
        return min((len(w) for w in self.terms), default=0)

    def max_word_length(self) -> int:
        return max((len(w) for w in self.terms), default=0)


def cyclic_derivative(W: Potential, arrow: str) -> NcPolynomial:
    a = W.quiver.arrow_index(arrow)
    out: dict[Word, Fraction] = {}
    for w, c in W.terms.items():
        for i, b in enumerate(w):
            if b == a:
                rest = w[i + 1:] + w[:i]
                out[rest] = out.get(rest, Fraction(0)) + c
    if any(len(p) == 0 for p in out):
        raise UnsupportedError("cyclic derivative of a length-1 word is an idempotent; such words are not supported")
    return NcPolynomial(W.quiver, out)


# --- evaluation on representations -------------------------------------------------


class RationalRing:
    """Scalar operations on Fractions, mirroring the finite-field interface."""

    zero = Fraction(0)
    one = Fraction(1)

    @staticmethod
    def add(a, b):
        return a + b

    @staticmethod
    def mul(a, b):
        return a * b

    @staticmethod
    def from_rational(c: Fraction):
        return Fraction(c)

    @staticmethod
    def coerce(x):
        return Fraction(x)


def _matmul(ring, A, B):
    rows, inner, cols = len(A), len(B), len(B[0]) if B else 0
    out = []
    for i in range(rows):
        row = []
        for j in range(cols):
            acc = ring.zero
            for k in range(inner):
                acc = ring.add(acc, ring.mul(A[i][k], B[k][j]))
            row.append(acc)
        out.append(row)
    return out


def trace_evaluate(W: Potential, rho: Mapping[str, Sequence[Sequence[Any]]], gamma: Sequence[int], ring: Any = None):
    """Evaluate Tr W at a representation.

    ``rho[name]`` is the matrix of the arrow as a map ``V_source -> V_target`` (shape
    ``gamma[target] x gamma[source]``). A word ``a1 a2 ... an`` acts as ``rho(an)...rho(a1)``.
    ``ring`` defaults to exact rationals; a :class:`~quiverdt.fqrep.field.FiniteField` works too.
    """
    q = W.quiver
    g = q.dimvec(gamma)
    ring = ring or RationalRing
    mats = {}
    for a in q.arrows:
        if a.name not in rho:
            raise DimensionError(f"representation is missing arrow {a.name!r}")
        m = [[ring.coerce(x) for x in row] for row in rho[a.name]]
        if len(m) != g[a.target] or any(len(r) != g[a.source] for r in m):
            raise DimensionError(f"matrix for {a.name!r} must be {g[a.target]}x{g[a.source]}")
        mats[a.name] = m
    total = ring.zero
    for w, c in W.terms.items():
        start = q.arrows[w[0]].source
        n = g[start]
        if n == 0:
            continue
        acc = [[ring.one if i == j else ring.zero for j in range(n)] for i in range(n)]
        for idx in w:
            acc = _matmul(ring, mats[q.arrows[idx].name], acc)
        tr = ring.zero
        for i in range(n):
            tr = ring.add(tr, acc[i][i])
        total = ring.add(total, ring.mul(ring.from_rational(c), tr))
    return total


# --- weights ------------------------------------------------------------------------


def _word_counts(W: Potential) -> tuple[list[int], list[list[int]]]:
    used = sorted({a for w in W.terms for a in w})
    rows = [[w.count(a) for a in used] for w in W.terms]
    return used, rows


def qh_weights(W: Potential, max_degree: int = 720) -> tuple[dict[str, int], int] | None:
    """Strictly positive integer arrow weights making every word of W of one degree, minimal degree.

    Arrows absent from W get weight 1. Returns ``None`` when no such weighting exists
    (searched up to ``max_degree``).
    """
    if W.is_zero():
        raise ArgumentError("qh_weights needs a nonzero potential")
    used, rows = _word_counts(W)
    # a word whose count vector dominates another's can never share its degree
    for r in rows:
        for s in rows:
            if r != s and all(x >= y for x, y in zip(r, s)):
                return None
    n = len(used)
    for d in range(1, max_degree + 1):
        sol = _search_weights(rows, n, d)
        if sol is not None:
            weights = {a.name: 1 for a in W.quiver.arrows}
            for a, wt in zip(used, sol):
                weights[W.quiver.arrows[a].name] = wt
            return weights, d
    return None


def _search_weights(rows: list[list[int]], n: int, d: int) -> list[int] | None:
    assign: list[int] = []

    def partial_ok() -> bool:
        k = len(assign)
        for r in rows:
            lo = sum(r[i] * assign[i] for i in range(k)) + sum(r[i] for i in range(k, n))
            if lo > d:
                return False
            if k == n and lo != d:
                return False
        return True

    def rec() -> bool:
        if len(assign) == n:
            return True
        for wt in range(1, d + 1):
            assign.append(wt)
            if partial_ok() and rec():
                return True
            assign.pop()
        return False

    return list(assign) if rec() else None


def weight_degree(W: Potential, weights: Mapping[str, int]) -> int | None:
    """Common weighted degree of all words, or None if they disagree."""
    degs = {sum(weights[W.quiver.arrows[a].name] for a in w) for w in W.terms}
    return degs.pop() if len(degs) == 1 else None


def congruence_modulus(W: Potential) -> int | None:
    """Positive generator of the degrees of all integer (possibly signed) weightings of W.

    Every integer weighting ``w`` with all words of equal degree ``D`` gives a scaling
    ``rho_a -> lam^{w_a} rho_a`` multiplying Tr W by ``lam^D``; the fibres of Tr W over
    ``c`` and ``c * lam^M`` are therefore equinumerous for this ``M``. Returns ``1`` for W = 0
    and ``None`` if only the zero degree is reachable.
    """
    if W.is_zero():
        return 1
    used, rows = _word_counts(W)
    base = rows[0]
    constraints = [[r[i] - base[i] for i in range(len(used))] for r in rows[1:]]
    basis = integer_kernel(constraints, len(used))
    degrees = [abs(sum(b * c for b, c in zip(vec, base))) for vec in basis]
    g = 0
    for d in degrees:
        g = math.gcd(g, d)
    return g or None


def integer_kernel(rows: list[list[int]], n: int) -> list[list[int]]:
    """A Z-basis of {w in Z^n : rows . w = 0} via unimodular column operations."""
    m = len(rows)
    # columns of the augmented matrix [A ; I]
    cols = [[rows[r][j] for r in range(m)] + [1 if k == j else 0 for k in range(n)] for j in range(n)]
    pivot_col = 0
    for r in range(m):
        # gcd-reduce entries in row r over columns pivot_col..n-1
        while True:
            nz = [j for j in range(pivot_col, n) if cols[j][r] != 0]
            if len(nz) <= 1:
                break
            j0 = min(nz, key=lambda j: abs(cols[j][r]))
            for j in nz:
                if j != j0:
                    f = cols[j][r] // cols[j0][r]
                    cols[j] = [a - f * b for a, b in zip(cols[j], cols[j0])]
        nz = [j for j in range(pivot_col, n) if cols[j][r] != 0]
        if nz:
            j0 = nz[0]
            cols[pivot_col], cols[j0] = cols[j0], cols[pivot_col]
            pivot_col += 1
    return [c[m:] for c in cols[pivot_col:]]


def abelianize(W: Potential, gamma: Sequence[int]) -> CommPoly:
    """Restriction of Tr W to a sector with all entries at most one, as a commutative polynomial.

    Variables are the arrows with both endpoints in the support; words leaving the
    support vanish on the sector and are dropped.
    """
    q = W.quiver
    g = q.dimvec(gamma)
    if any(x > 1 for x in g):
        raise UnsupportedError("abelianize needs every dimension entry to be 0 or 1")
    live = [i for i, a in enumerate(q.arrows) if g[a.source] == 1 and g[a.target] == 1]
    pos = {a: k for k, a in enumerate(live)}
    terms: dict[tuple[int, ...], Fraction] = {}
    for w, c in W.terms.items():
        if any(a not in pos for a in w):
            continue
        mono = [0] * len(live)
        for a in w:
            mono[pos[a]] += 1
        key = tuple(mono)
        terms[key] = terms.get(key, Fraction(0)) + c
    return CommPoly(tuple(q.arrows[i].name for i in live), terms)
