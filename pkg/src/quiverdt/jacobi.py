"""Dimensions of completed Jacobi algebras and local Milnor algebras by truncated elimination.

Both computations share one engine: the span of all monomial multiples of the relations,
truncated above degree N, is row-reduced with the least monomial (degree first, then
lexicographic) as the pivot. Monomials that never occur as a pivot are the survivors.
The survivors of degree k only depend on the relations modulo degree k + 1, so they do
not change when N grows. If some degree N* has no survivors, the maximal ideal to the
power N* lies in the closure of the relation ideal, and the algebra is spanned by the
survivors of degree below N*.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable, Iterable

from .errors import ArgumentError, BudgetError, UnsupportedError
from .ncalg import Potential, cyclic_derivative
from .polys import CommPoly
from .quiver import Quiver

DEFAULT_NMAX = 24
ROW_BUDGET = 400_000


class Eliminator:
    """Sparse row reduction over the rationals keyed by a monomial order."""

    def __init__(self, key: Callable[[Hashable], tuple]):
        self.key = key
        self.pivots: dict[Hashable, dict[Hashable, Fraction]] = {}

    def add(self, row: dict[Hashable, Fraction]) -> Hashable | None:
        row = {m: c for m, c in row.items() if c}
        while row:
            lead = min(row, key=self.key)
            piv = self.pivots.get(lead)
            if piv is None:
                inv = 1 / row[lead]
                self.pivots[lead] = {m: c * inv for m, c in row.items()}
                return lead
            f = row[lead]
            for m, c in piv.items():
                v = row.get(m, 0) - f * c
                if v:
                    row[m] = v
                else:
                    row.pop(m, None)
        return None


# -- noncommutative side ---------------------------------------------------------------

# A monomial path is (word, vertex); the vertex is 0 for nonempty words.
Path = tuple[tuple[int, ...], int]


def _path_key(p: Path) -> tuple:
    return (len(p[0]), p[0], p[1])


def _paths_by_length(Q: Quiver, N: int) -> list[list[Path]]:
    """All paths grouped by length, read left to right (target of each arrow = source of the next)."""
    layers: list[list[Path]] = [[((), i) for i in range(Q.vertex_count)]]
    for _ in range(N):
        nxt = []
        for word, v in layers[-1]:
            end = Q.arrows[word[-1]].target if word else v
            for j, a in enumerate(Q.arrows):
                if a.source == end:
                    nxt.append((word + (j,), 0))
        layers.append(sorted(nxt, key=_path_key))
    return layers


def _endpoints(Q: Quiver, p: Path) -> tuple[int, int]:
    word, v = p
    if not word:
        return v, v
    return Q.arrows[word[0]].source, Q.arrows[word[-1]].target


@dataclass
class TruncatedQuotient:
    """Survivor monomials of the Jacobi algebra modulo paths of length above N."""

    quiver: Quiver
    N: int
    basis: list[list[Path]]
    rows: int = 0
    homogeneous: bool = True

    @property
    def profile(self) -> list[int]:
        return [len(b) for b in self.basis]

    def named_basis(self, degree: int) -> list[str]:
        out = []
        for word, v in self.basis[degree]:
            out.append(" ".join(self.quiver.arrows[a].name for a in word) if word else f"e{v}")
        return out


@dataclass
class FinitenessCertificate:
    certified: bool
    N_star: int | None = None
    dim_total: int | None = None
    dim_by_vertex_pair: list[list[int]] | None = None
    profile: list[int] = field(default_factory=list)


def _derivatives(W: Potential) -> list[dict[Path, Fraction]]:
    Q = W.quiver
    if W.is_zero():
        return []
    if W.min_word_length() < 2:
        raise UnsupportedError("potential words must have length at least 2")
    rels = []
    for a in Q.arrows:
        d = cyclic_derivative(W, a.name)
        if d.terms:
            rels.append({(w, 0): c for w, c in d.terms.items()})
    return rels


def truncated_dim_profile(Q: Quiver, W: Potential, N_max: int = DEFAULT_NMAX,
                          row_budget: int = ROW_BUDGET) -> TruncatedQuotient:
    if W.quiver != Q:
        raise ArgumentError("potential lives on a different quiver")
    if N_max < 1:
        raise ArgumentError("truncation degree must be positive")
    if N_max < W.max_word_length():
        raise ArgumentError(f"truncation degree {N_max} is below the longest word length {W.max_word_length()}")
    rels = _derivatives(W)
    layers = _paths_by_length(Q, N_max)
    elim = Eliminator(_path_key)
    count = 0
    homogeneous = True
    for rel in rels:
        low = min(len(p[0]) for p in rel)
        if len({len(p[0]) for p in rel}) > 1:
            homogeneous = False
        start, end = _endpoints(Q, min(rel, key=_path_key))
        for lp in range(N_max - low + 1):
            for left in layers[lp]:
                if _endpoints(Q, left)[1] != start:
                    continue
                for lq in range(N_max - low - lp + 1):
                    for right in layers[lq]:
                        if _endpoints(Q, right)[0] != end:
                            continue
                        row = {}
                        for (w, _), c in rel.items():
                            word = left[0] + w + right[0]
                            if len(word) <= N_max:
                                row[(word, 0)] = c
                        count += 1
                        if count > row_budget:
                            raise BudgetError(f"more than {row_budget} relation rows at truncation {N_max}")
                        elim.add(row)
    basis = []
    for layer in layers:
        basis.append([p for p in layer if p not in elim.pivots])
    return TruncatedQuotient(Q, N_max, basis, count, homogeneous)


def finiteness_certificate(T: TruncatedQuotient) -> FinitenessCertificate:
    profile = T.profile
    for n_star in range(1, T.N + 1):
        if profile[n_star] == 0:
            n = T.quiver.vertex_count
            pairs = [[0] * n for _ in range(n)]
            for layer in T.basis[:n_star]:
                for p in layer:
                    s, t = _endpoints(T.quiver, p)
                    pairs[s][t] += 1
            return FinitenessCertificate(True, n_star, sum(profile[:n_star]), pairs, profile)
    return FinitenessCertificate(False, profile=profile)


def jacobi_dimension(Q: Quiver, W: Potential, N_max: int = DEFAULT_NMAX) -> FinitenessCertificate:
    return finiteness_certificate(truncated_dim_profile(Q, W, N_max))


def dim_by_vertex_pair(Q: Quiver, W: Potential, N_max: int = DEFAULT_NMAX) -> list[list[int]] | None:
    return jacobi_dimension(Q, W, N_max).dim_by_vertex_pair


# -- commutative side ------------------------------------------------------------------

def _monomials(nvars: int, degree: int) -> Iterable[tuple[int, ...]]:
    if nvars == 1:
        yield (degree,)
        return
    for first in range(degree, -1, -1):
        for rest in _monomials(nvars - 1, degree - first):
            yield (first,) + rest


def _mono_key(m: tuple[int, ...]) -> tuple:
    return (sum(m), tuple(-e for e in m))


def milnor_basis(f: CommPoly | str, N_max: int = DEFAULT_NMAX) -> list[tuple[int, ...]] | None:
    """Monomial basis of C[[x]]/(df/dx_i) when certified within degree N_max, else None."""
    if isinstance(f, str):
        f = CommPoly.parse(f)
    if f.is_zero():
        return None
    if f.min_degree() < 2:
        raise ArgumentError("polynomial must have no terms of degree below 2")
    n = f.nvars
    elim = Eliminator(_mono_key)
    for i in range(n):
        d = f.derivative(i)
        if d.is_zero():
            continue
        low = d.min_degree()
        for k in range(N_max - low + 1):
            for mono in _monomials(n, k):
                row = {}
                for m, c in d.terms.items():
                    prodm = tuple(a + b for a, b in zip(m, mono))
                    if sum(prodm) <= N_max:
                        row[prodm] = c
                elim.add(row)
    basis: list[tuple[int, ...]] = []
    for deg in range(N_max + 1):
        alive = [m for m in _monomials(n, deg) if m not in elim.pivots]
        if not alive:
            return basis
        basis.extend(alive)
    return None


def local_milnor(f: CommPoly | str, N_max: int = DEFAULT_NMAX) -> int | None:
    """dim of C[[x]]/(df/dx_i) when certified within degree N_max, else None (not isolated)."""
    basis = milnor_basis(f, N_max)
    return None if basis is None else len(basis)
