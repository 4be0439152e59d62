"""Quivers, dimension vectors, the Euler form, framing and simple-existence."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import ArgumentError, DimensionError, InputError

DimVector = tuple[int, ...]


@dataclass(frozen=True)
class Arrow:
    name: str
    source: int
    target: int


@dataclass(frozen=True)
class Quiver:
    """A finite quiver with 0-indexed vertices and arrows kept in file order."""

    vertex_count: int
    arrows: tuple[Arrow, ...]

    def __post_init__(self) -> None:
        if not isinstance(self.vertex_count, int) or self.vertex_count < 1:
            raise InputError("vertex_count must be a positive integer")
        seen: set[str] = set()
        for a in self.arrows:
            if a.name in seen:
                raise InputError(f"duplicate arrow name {a.name!r}")
            seen.add(a.name)
            for end in (a.source, a.target):
                if not 0 <= end < self.vertex_count:
                    raise InputError(f"arrow {a.name!r} endpoint {end} out of range")

    @classmethod
    def from_arrows(cls, vertex_count: int, arrows: Iterable[tuple[str, int, int]]) -> "Quiver":
        return cls(vertex_count, tuple(Arrow(n, s, t) for n, s, t in arrows))

    @property
    def arrow_names(self) -> tuple[str, ...]:
        return tuple(a.name for a in self.arrows)

    def arrow_index(self, name: str) -> int:
        for i, a in enumerate(self.arrows):
            if a.name == name:
                return i
        raise ArgumentError(f"unknown arrow {name!r}")

    def arrow_count(self, i: int, j: int) -> int:
        return sum(1 for a in self.arrows if a.source == i and a.target == j)

    def is_symmetric(self) -> bool:
        n = self.vertex_count
        return all(self.arrow_count(i, j) == self.arrow_count(j, i) for i in range(n) for j in range(i + 1, n))

    def dimvec(self, gamma: Sequence[int]) -> DimVector:
        """Validate and normalise a dimension vector."""
        g = tuple(int(x) for x in gamma)
        if len(g) != self.vertex_count:
            raise DimensionError(f"dimension vector {g} has length {len(g)}, quiver has {self.vertex_count} vertices")
        if any(x < 0 for x in g):
            raise DimensionError(f"dimension vector {g} has negative entries")
        return g

    def euler_form(self, gamma: Sequence[int], delta: Sequence[int]) -> int:
        g, d = self.dimvec(gamma), self.dimvec(delta)
        return sum(x * y for x, y in zip(g, d)) - sum(g[a.source] * d[a.target] for a in self.arrows)

    def rep_dim(self, gamma: Sequence[int]) -> int:
        g = self.dimvec(gamma)
        return sum(g[a.source] * g[a.target] for a in self.arrows)

    def frame(self, gamma: Sequence[int], m: int) -> tuple["Quiver", DimVector]:
        """Add a vertex with ``m`` arrows into every original vertex; dimension ``(gamma, 1)``."""
        g = self.dimvec(gamma)
        if not isinstance(m, int) or m < 1:
            raise ArgumentError("framing rank m must be a positive integer")
        inf = self.vertex_count
        taken = set(self.arrow_names)
        new = list(self.arrows)
        for i in range(self.vertex_count):
            for j in range(m):
                name = f"fr{i}_{j}"
                while name in taken:
                    name = "_" + name
                taken.add(name)
                new.append(Arrow(name, inf, i))
        return Quiver(self.vertex_count + 1, tuple(new)), g + (1,)

    def simple_exists(self, gamma: Sequence[int]) -> bool:
        """Whether a simple representation of dimension ``gamma`` exists (Le Bruyn–Procesi)."""
        g = self.dimvec(gamma)
        if sum(g) == 0:
            raise ArgumentError("simple_exists needs a nonzero dimension vector")
        supp = [i for i, x in enumerate(g) if x > 0]
        if len(supp) == 1 and g[supp[0]] == 1:
            return True
        inner = [a for a in self.arrows if g[a.source] > 0 and g[a.target] > 0]
        if not _strongly_connected(supp, inner):
            return False
        if _is_single_cycle(supp, inner):
            return all(g[i] == 1 for i in supp)
        for i in supp:
            if g[i] > sum(g[a.source] for a in inner if a.target == i):
                return False
            if g[i] > sum(g[a.target] for a in inner if a.source == i):
                return False
        return True


def _strongly_connected(vertices: list[int], arrows: list[Arrow]) -> bool:
    if not vertices:
        return False
    fwd: dict[int, set[int]] = {v: set() for v in vertices}
    bwd: dict[int, set[int]] = {v: set() for v in vertices}
    for a in arrows:
        fwd[a.source].add(a.target)
        bwd[a.target].add(a.source)

    def reach(adj: dict[int, set[int]]) -> set[int]:
        seen = {vertices[0]}
        stack = [vertices[0]]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return seen

    return len(reach(fwd)) == len(vertices) and len(reach(bwd)) == len(vertices)


def _is_single_cycle(vertices: list[int], arrows: list[Arrow]) -> bool:
    # strongly connected with exactly one outgoing and one incoming arrow per vertex
    if len(arrows) != len(vertices):
        return False
    outs = {v: 0 for v in vertices}
    ins = {v: 0 for v in vertices}
    for a in arrows:
        outs[a.source] += 1
        ins[a.target] += 1
    return all(outs[v] == 1 and ins[v] == 1 for v in vertices)


def one_loop() -> Quiver:
    return Quiver.from_arrows(1, [("x", 0, 0)])


def two_loop() -> Quiver:
    return Quiver.from_arrows(1, [("x", 0, 0), ("y", 0, 0)])


def doubled_a2() -> Quiver:
    return Quiver.from_arrows(2, [("x", 0, 1), ("y", 1, 0)])
