"""Fibre counts of Tr W over representation spaces, with reports."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from ..errors import BudgetError, CongruenceError, InternalConsistencyError
from ..ncalg import Potential, congruence_modulus
from ..quiver import Quiver
from . import brute, classsum
from .field import FiniteField, field_make, gl_order, prime_power

DEFAULT_BUDGET = 1 << 34


@dataclass(frozen=True)
class CountReport:
    """Counts of points with Tr W = 0 and Tr W = 1.

    ``total`` is the number of points in the domain (all representations, or the stable
    framed ones). ``average`` is the mean size of a nonzero fibre, which together with
    N0 and N1 determines the full additive-character sum at fields where every relevant
    Gauss sum is the same real number.
    """

    gamma: tuple[int, ...]
    q: int
    N0: int
    N1: int
    total: int
    modulus: int
    framing: int = 0
    method: str = "brute"
    elapsed: float = field(default=0.0, compare=False)

    @property
    def E(self) -> int:
        return self.N0 - self.N1

    @property
    def average(self) -> Fraction:
        return Fraction(self.total - self.N0, self.q - 1)

    @property
    def invariant_part(self) -> Fraction:
        return self.N0 - self.average

    @property
    def twisted_part(self) -> Fraction:
        return self.N1 - self.average

    @property
    def congruent(self) -> bool:
        return (self.q - 1) % self.modulus == 0

    @property
    def per_gl(self) -> Fraction:
        return Fraction(self.E, gl_order(self.gamma, self.q))

    def as_dict(self) -> dict:
        return {
            "gamma": list(self.gamma),
            "q": self.q,
            "N0": self.N0,
            "N1": self.N1,
            "E": self.E,
            "total": self.total,
            "framing": self.framing,
            "modulus": self.modulus,
            "method": self.method,
        }


def as_field(field_or_q) -> FiniteField:
    if isinstance(field_or_q, FiniteField):
        return field_or_q
    pk = prime_power(int(field_or_q))
    if pk is None:
        from ..errors import ArgumentError

        raise ArgumentError(f"{field_or_q} is not a prime power")
    return field_make(*pk)


def _modulus(W: Potential) -> int:
    M = congruence_modulus(W)
    if M is None:
        from ..errors import UnsupportedError

        raise UnsupportedError("potential is not quasi-homogeneous; point counts are not defined for it here")
    return M


def _count(Q: Quiver, W: Potential, gamma, F: FiniteField, frame_m: int, jobs: int,
           budget: int, strict: bool, method: str) -> CountReport:
    if W.quiver != Q:
        raise ValueError("potential lives on a different quiver")
    g = Q.dimvec(gamma)
    M = _modulus(W)
    if strict and (F.q - 1) % M:
        raise CongruenceError(f"q = {F.q} is not 1 mod {M}; nonzero fibres need not be equinumerous")
    start = time.perf_counter()
    use_class = method == "class" or (method == "auto" and classsum.supports(W, g, bool(frame_m)))
    if use_class:
        n0, n1, total = classsum.class_counts(F, W, g, frame_m)
        how = "class"
    else:
        points = F.q ** (Q.rep_dim(g) + frame_m * sum(g))
        if points > budget:
            raise BudgetError(f"{points} points exceed the enumeration budget {budget}")
        n0, n1, total = brute.brute_counts(F, W, g, frame_m, jobs)
        how = "brute"
    if n0 < 1 and not frame_m:
        raise InternalConsistencyError("zero representation missing from the zero fibre")
    return CountReport(g, F.q, n0, n1, total, M, frame_m, how, time.perf_counter() - start)


def exp_sum_count(Q: Quiver, W: Potential, gamma: Sequence[int], field, *, jobs: int = 1,
                  budget: int = DEFAULT_BUDGET, strict: bool = True, method: str = "auto") -> CountReport:
    """Count Tr W = 0 and Tr W = 1 on all gamma-dimensional representations over the field.

    With ``strict`` the field size must be 1 modulo the congruence modulus of W.
    ``method`` is "auto", "brute" or "class".
    """
    return _count(Q, W, gamma, as_field(field), 0, jobs, budget, strict, method)


def framed_exp_sum_count(Q: Quiver, W: Potential, gamma: Sequence[int], m: int, field, *, jobs: int = 1,
                         budget: int = DEFAULT_BUDGET, strict: bool = True,
                         method: str = "auto") -> CountReport:
    """Like exp_sum_count, restricted to framings by m vectors per vertex that generate the module."""
    if m < 1:
        from ..errors import ArgumentError

        raise ArgumentError("framing rank must be positive")
    rep = _count(Q, W, gamma, as_field(field), m, jobs, budget, strict, method)
    order = gl_order(rep.gamma, rep.q)
    if rep.N0 % order or rep.N1 % order or rep.total % order:
        raise InternalConsistencyError(f"framed counts at q = {rep.q} are not divisible by |GL| = {order}")
    return rep
