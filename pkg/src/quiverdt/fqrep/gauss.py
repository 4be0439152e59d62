"""Fields on which all Gauss sums of characters of order dividing M coincide.

For a scaling-invariant function f (Tr W(lam . x) = lam^M Tr W(x)) the additive-character
sum over a finite field is

    sum_x psi(f(x)) = (N0 - I) + sum_{chi^M = 1, chi != 1} S(chi) g(chi^-1) / (q - 1),

with N_c the fibre sizes, I = (|X| - N0)/(q - 1) and S(chi) = sum_c N_c chi(c). If every
g(chi) equals one real value G = +-sqrt(q), the sum collapses to the exact expression
(N0 - I) + G (N1 - I). The uniformity is decided here exactly from trace distributions
of c * x^M, without complex numbers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from ..numbers import QuadNum, isqrt_exact
from .field import MAX_FIELD, FiniteField, field_make, prime_power


@dataclass(frozen=True)
class GaussDatum:
    q: int
    modulus: int
    sign: int  # common Gauss sum G = sign * sqrt(q)

    @property
    def gauss_sum(self) -> QuadNum:
        return QuadNum.sqrt(self.q, self.sign)

    @property
    def line_element(self) -> QuadNum:
        """Realisation of the formal line element s at this field: s = -G."""
        return QuadNum.sqrt(self.q, -self.sign)


def _legendre(u: int, p: int) -> int:
    if u % p == 0:
        return 0
    return 1 if pow(u, (p - 1) // 2, p) == 1 else -1


@lru_cache(maxsize=None)
def uniform_gauss_sign(F: FiniteField, M: int) -> GaussDatum | None:
    """The common Gauss sum of the order-dividing-M characters, if it is a real sqrt(q).

    ``M = 1`` has no non-trivial characters; the conventional sign +1 is returned.
    """
    q, p, k = F.q, F.p, F.k
    if M < 1 or (q - 1) % M:
        return None
    if M == 1:
        return GaussDatum(q, M, 1)
    xm = F.vpow(np.arange(q), M)
    tr = F.trace_table
    root = isqrt_exact(q)
    if root is None and (p == 2 or p % 4 == 3):
        return None  # sqrt(q) is not a real element of Q(zeta_p)
    half = p ** ((k - 1) // 2) if root is None else None
    sign = None
    for j in range(M):
        c = int(F.exp_table[j])
        counts = np.bincount(tr[F.vmul(c, xm)], minlength=p)
        expected_factor = (M - 1) if j == 0 else -1
        if root is not None:
            if len(set(counts[1:].tolist())) != 1:
                return None
            t = int(counts[0] - counts[1])  # = G * expected_factor
            g = Fraction(t, expected_factor)
            if abs(g) != root:
                return None
            s = 1 if g > 0 else -1
        else:
            diffs = counts[1:] - counts[0]
            kappa = None
            for u in range(1, p):
                leg = _legendre(u, p)
                val = Fraction(int(diffs[u - 1]), leg)
                if kappa is None:
                    kappa = val
                elif kappa != val:
                    return None
            # T(c) = kappa * sqrt(p) = G * factor = s * p^{(k-1)/2} * sqrt(p) * factor
            g = Fraction(kappa, half * expected_factor)
            if abs(g) != 1:
                return None
            s = int(g)
        if sign is None:
            sign = s
        elif sign != s:
            return None
    return GaussDatum(q, M, sign)


def _semiprimitive(p: int, M: int) -> bool:
    """Whether some power of p is -1 mod M (then Gauss sums of order M are pure)."""
    x = p % M
    seen = set()
    while x not in seen:
        if x == M - 1:
            return True
        seen.add(x)
        x = x * p % M
    return False


def candidate_sizes(M: int, limit: int = MAX_FIELD, start: int = 2):
    """Prime powers q with M | q - 1 worth testing, ascending.

    For M > 2 only semiprimitive characteristics are proposed; every proposal is still
    confirmed by :func:`uniform_gauss_sign`.
    """
    for q in range(max(start, 2), limit + 1):
        pk = prime_power(q)
        if pk is None or (q - 1) % M:
            continue
        if M > 2 and not _semiprimitive(pk[0], M):
            continue
        yield q


def gauss_datum(q: int, M: int) -> GaussDatum | None:
    pk = prime_power(q)
    if pk is None or (q - 1) % M:
        return None
    if M == 1:
        return GaussDatum(q, 1, 1)
    return uniform_gauss_sign(field_make(*pk), M)


def iter_gauss_fields(M: int, limit: int = MAX_FIELD, start: int = 2):
    """GaussDatum for every confirmed field size in [start, limit], ascending, lazily."""
    for q in candidate_sizes(M, limit, start):
        datum = gauss_datum(q, M)
        if datum is not None:
            yield datum


def pure_gauss_fields(M: int, limit: int = MAX_FIELD, start: int = 2) -> list[int]:
    """Field sizes in [start, limit] with uniform real Gauss sums for modulus M, ascending."""
    return [d.q for d in iter_gauss_fields(M, limit, start)]
