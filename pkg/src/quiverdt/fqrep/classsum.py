"""Exact counts of Tr W fibres via conjugacy-class sums.

Two shapes are handled: a single loop, where Tr W = sum_k c_k tr(X^k), and a pair of
vertices joined by one arrow each way, where Tr W = sum_k c_k tr((YX)^k). In both cases
the count reduces to a sum over similarity classes of square matrices of size at most 3,
organised by the primary decomposition. For each class type the number of matrices with a
given trace value is a convolution of histograms of irreducible polynomials by value.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from math import factorial, prod

import numpy as np

from ..errors import BudgetError
from ..ncalg import Potential
from .field import FiniteField, gl_order

MAX_SIZE = 3
CUBE_BUDGET = 1 << 27


# -- partitions and centralisers --------------------------------------------------------

@lru_cache(maxsize=None)
def partitions(n: int, largest: int | None = None) -> tuple[tuple[int, ...], ...]:
    if largest is None:
        largest = n
    if n == 0:
        return ((),)
    out = []
    for first in range(min(n, largest), 0, -1):
        for rest in partitions(n - first, first):
            out.append((first,) + rest)
    return tuple(out)


def centraliser(lam: tuple[int, ...], t: int) -> int:
    """Order of the centraliser of a primary block with Jordan type lam over a field of size t."""
    if not lam:
        return 1
    size = sum(lam)
    n_lam = sum(i * part for i, part in enumerate(lam))
    value = Fraction(t) ** (size + 2 * n_lam)
    for m in (lam.count(part) for part in set(lam)):
        for j in range(1, m + 1):
            value *= 1 - Fraction(1, t**j)
    assert value.denominator == 1
    return int(value)


def gaussian_binomial(n: int, k: int, q: int) -> int:
    if k < 0 or k > n:
        return 0
    num = prod(q ** (n - i) - 1 for i in range(k))
    den = prod(q ** (i + 1) - 1 for i in range(k))
    return num // den


def pair_fibre(rank: int, a: int, b: int, q: int) -> int:
    """#{(X, Y) : X in Hom(F^a, F^b), Y in Hom(F^b, F^a), YX = P} for P of the given rank."""
    total = 0
    for k in range(rank, min(a, b) + 1):
        inj = prod(q**b - q**i for i in range(k))
        total += gaussian_binomial(a - rank, a - k, q) * inj * q ** (a * (b - k))
    return total


def framed_generators(d: int, lam: tuple[int, ...], q: int, m: int) -> int:
    """Number of m-tuples generating a primary module of type lam over F_{q^d} as F[x]-module."""
    if not lam:
        return 1
    Q = q**d
    ell = len(lam)
    return Q ** (m * (sum(lam) - ell)) * prod(Q**m - Q**i for i in range(ell))


# -- class types ---------------------------------------------------------------------------

Block = tuple[int, tuple[int, ...]]  # (degree of the irreducible, Jordan type)


@lru_cache(maxsize=None)
def class_types(n: int) -> tuple[tuple[tuple[int, ...], tuple[Block, ...]], ...]:
    """All (zero-root partition, multiset of nonzero primary blocks) of total size n."""
    out = []
    for n0 in range(n + 1):
        for lam0 in partitions(n0):
            for blocks in _block_multisets(n - n0):
                out.append((lam0, blocks))
    return tuple(out)


def _block_multisets(n: int) -> list[tuple[Block, ...]]:
    kinds = [(d, lam) for d in range(1, n + 1) for e in range(1, n // d + 1) for lam in partitions(e)]
    out = []
    for r in range(n + 1):
        for combo in combinations_with_replacement(kinds, r):
            if sum(d * sum(lam) for d, lam in combo) == n:
                out.append(tuple(combo))
    return out


def _set_partitions(items: list[int]):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


# -- histograms of irreducible polynomials by value ---------------------------------------

class ValueHistograms:
    """Histograms over F_q of v(P) = sum_k c_k p_k(roots of P) for monic irreducible P != x."""

    def __init__(self, F: FiniteField, coeffs: dict[int, int], max_degree: int):
        self.F = F
        self.coeffs = {k: c for k, c in coeffs.items() if c}
        self.q = F.q
        self._conv_cache: dict = {}
        q = F.q
        a = np.arange(q, dtype=np.int64)
        root_vals = self._eval_powers(a)
        self.full1 = np.bincount(root_vals, minlength=q).astype(np.int64)
        self._root_vals = root_vals
        h1 = self.full1.copy()
        h1[root_vals[0]] -= 1
        self.hist = {1: h1}
        if max_degree >= 2:
            self.hist[2] = self._quadratic()
        if max_degree >= 3:
            self.hist[3] = self._cubic()

    def _eval_powers(self, a: np.ndarray) -> np.ndarray:
        F = self.F
        acc = np.zeros_like(a)
        for k, c in self.coeffs.items():
            acc = F.vadd(acc, F.vmul(np.int64(c), F.vpow(a, k)))
        return acc

    def conv(self, h1: np.ndarray, h2: np.ndarray) -> np.ndarray:
        F, q = self.F, self.q
        out = np.zeros(q, dtype=np.int64)
        idx = np.arange(q, dtype=np.int64)
        for a in np.nonzero(h1)[0]:
            out[F.vadd(np.int64(a), idx)] += h1[a] * h2
        return out

    def conv_at(self, hs: list[np.ndarray], c: int) -> int:
        F, q = self.F, self.q
        if not hs:
            return 1 if c == 0 else 0
        if len(hs) == 1:
            return int(hs[0][c])
        acc = hs[1]
        for h in hs[2:]:
            acc = self.conv(acc, h)
        idx = np.arange(q, dtype=np.int64)
        shifted = acc[F.vsub(np.int64(c), idx)]
        return int(np.dot(hs[0], shifted))

    # power-sum values as polynomials in the last elementary symmetric function
    def _value_poly(self, es: list[list[np.ndarray]]) -> list[np.ndarray]:
        F = self.F
        D = len(es)
        top = max(self.coeffs, default=0)
        shape = es[0][0].shape
        zero = np.zeros(shape, dtype=np.int64)
        p: list[list[np.ndarray]] = [[]]
        for k in range(1, top + 1):
            acc: list[np.ndarray] = []
            for i in range(1, min(k - 1, D) + 1):
                term = _pmul(F, es[i - 1], p[k - i])
                acc = _padd(F, acc, term if i % 2 == 1 else _pneg(F, term))
            if k <= D:
                term = _pscale(F, es[k - 1], F.from_int(k))
                acc = _padd(F, acc, term if k % 2 == 1 else _pneg(F, term))
            p.append(acc)
        value: list[np.ndarray] = []
        for k, c in self.coeffs.items():
            value = _padd(F, value, _pscale(F, p[k], c))
        return value or [zero]

    def _all_monic(self, degree: int) -> np.ndarray:
        """Histogram of v over all monic polynomials of the given degree (2 or 3)."""
        F, q = self.F, self.q
        out = np.zeros(q, dtype=np.int64)
        idx = np.arange(q, dtype=np.int64)
        if degree == 2:
            for e1 in range(q):
                val = self._value_poly([[np.full(q, e1, dtype=np.int64)], [idx]])
                out += _hist(_peval_const(val), q)
            return out
        # degree 3: loop over e1, vectorise over e2, treat e3 as a polynomial variable
        zero = np.zeros(q, dtype=np.int64)
        one = np.ones(q, dtype=np.int64)
        for e1 in range(q):
            val = self._value_poly([[np.full(q, e1, dtype=np.int64)], [idx], [zero, one]])
            val = _ptrim(val)
            if len(val) <= 1:
                out += q * _hist(val[0] if val else zero, q)
            elif len(val) == 2:
                const, slope = val
                flat = slope == 0
                out += q * _hist(const[flat], q)
                out += int((~flat).sum())
            else:
                if q**3 > CUBE_BUDGET:
                    raise BudgetError("cubic value histogram exceeds the enumeration budget")
                for e3 in range(q):
                    out += _hist(_peval(F, val, e3), q)
        return out

    def _pow_hist(self, k: int) -> np.ndarray:
        return _push(self.full1, self.F.vmul(np.arange(self.q, dtype=np.int64), np.int64(self.F.from_int(k))), self.q)

    def _quadratic(self) -> np.ndarray:
        f1 = self.full1
        reducible = self.conv(f1, f1) + self._pow_hist(2)
        assert (reducible % 2 == 0).all()
        return self._all_monic(2) - reducible // 2

    def _cubic(self) -> np.ndarray:
        f1 = self.full1
        f11 = self.conv(f1, f1)
        three = self.conv(f11, f1) + 3 * self.conv(self._pow_hist(2), f1) + 2 * self._pow_hist(3)
        assert (three % 6 == 0).all()
        reducible = three // 6 + self.conv(f1, self.hist[2])
        return self._all_monic(3) - reducible


def _push(h: np.ndarray, image: np.ndarray, q: int) -> np.ndarray:
    out = np.zeros(q, dtype=np.int64)
    np.add.at(out, image, h)
    return out


def _hist(vals: np.ndarray, q: int) -> np.ndarray:
    return np.bincount(np.asarray(vals, dtype=np.int64).ravel(), minlength=q).astype(np.int64)


def _ptrim(p):
    p = list(p)
    while p and not np.any(p[-1]):
        p.pop()
    return p


def _padd(F, a, b):
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        if i < len(a) and i < len(b):
            out.append(F.vadd(a[i], b[i]))
        else:
            out.append(a[i] if i < len(a) else b[i])
    return out


def _pneg(F, a):
    return [F.vneg(x) for x in a]


def _pscale(F, a, c):
    return [F.vmul(x, np.int64(c)) for x in a]


def _pmul(F, a, b):
    if not a or not b:
        return []
    out = [None] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            t = F.vmul(x, y)
            out[i + j] = t if out[i + j] is None else F.vadd(out[i + j], t)
    return out


def _peval_const(p):
    return p[0] if len(_ptrim(p)) <= 1 else _raise_nonconst()


def _raise_nonconst():
    raise AssertionError("expected a constant polynomial")


def _peval(F, p, x: int):
    acc = np.zeros_like(p[0])
    for c in reversed(p):
        acc = F.vadd(F.vmul(acc, np.int64(x)), c)
    return acc


# -- shape detection -----------------------------------------------------------------------

def loop_coefficients(W: Potential) -> dict[int, int] | None:
    """Coefficients c_k of W = sum c_k x^k when the quiver is a single loop."""
    Q = W.quiver
    if Q.vertex_count != 1 or len(Q.arrows) != 1:
        return None
    return {len(w): c for w, c in W.terms.items()}


def pair_coefficients(W: Potential) -> dict[int, Fraction] | None:
    """Coefficients c_k of W = sum c_k (xy)^k on two vertices with one arrow each way."""
    Q = W.quiver
    if Q.vertex_count != 2 or len(Q.arrows) != 2:
        return None
    ends = sorted((a.source, a.target) for a in Q.arrows)
    if ends != [(0, 1), (1, 0)]:
        return None
    return {len(w) // 2: c for w, c in W.terms.items()}


def supports(W: Potential, gamma, framed: bool) -> bool:
    g = tuple(gamma)
    if loop_coefficients(W) is not None:
        return g[0] <= MAX_SIZE
    if pair_coefficients(W) is not None and not framed:
        return min(g) <= MAX_SIZE
    return False


# -- the counts ----------------------------------------------------------------------------

def class_counts(F: FiniteField, W: Potential, gamma, frame_m: int = 0) -> tuple[int, int, int]:
    """(N0, N1, domain size), matching the brute-force enumeration exactly."""
    q = F.q
    g = tuple(gamma)
    loop = loop_coefficients(W)
    if loop is not None:
        n = g[0]
        coeffs = loop
        weight_of_rank = lambda r: 1  # noqa: E731
        domain_expected = q ** (n * n)
    else:
        coeffs = pair_coefficients(W)
        if coeffs is None or frame_m:
            raise ValueError("quiver shape not supported by class sums")
        a, b = g if g[0] <= g[1] else (g[1], g[0])
        n = a
        weight_of_rank = lambda r: pair_fibre(r, a, b, q)  # noqa: E731
        domain_expected = q ** (2 * a * b)
    fcoeffs = {k: F.from_rational(c) for k, c in coeffs.items()}
    hists = ValueHistograms(F, fcoeffs, n) if n else None
    gl = gl_order((n,), q)
    totals = {0: 0, 1: 0, "all": 0}
    for lam0, blocks in class_types(n):
        denom = centraliser(lam0, q) * prod(centraliser(lam, q**d) for d, lam in blocks)
        size = gl // denom
        assert size * denom == gl
        w = size * weight_of_rank(n - len(lam0))
        if frame_m:
            w *= framed_generators(1, lam0, q, frame_m)
            w *= prod(framed_generators(d, lam, q, frame_m) for d, lam in blocks)
        aut = prod(factorial(blocks.count(b)) for b in set(blocks))
        for key in totals:
            tuples = _distinct_tuples(hists, blocks, key)
            assert tuples % aut == 0
            totals[key] += w * (tuples // aut)
    if not frame_m and totals["all"] != domain_expected:
        raise AssertionError("class sum does not exhaust the representation space")
    return totals[0], totals[1], totals["all"]


def _distinct_tuples(hists: ValueHistograms | None, blocks, key) -> int:
    """Ordered tuples of distinct irreducibles (degrees fixed by blocks) with weighted value key."""
    if not blocks:
        return 1 if key in (0, "all") else 0
    total = 0
    positions = list(range(len(blocks)))
    for part in _set_partitions(positions):
        if any(len({blocks[i][0] for i in B}) > 1 for B in part):
            continue
        mu = prod((-1) ** (len(B) - 1) * factorial(len(B) - 1) for B in part)
        hs = []
        for B in part:
            d = blocks[B[0]][0]
            m = sum(sum(blocks[i][1]) for i in B)
            hs.append((d, m))
        total += mu * _conv_cached(hists, tuple(sorted(hs)), key)
    return total


def _conv_cached(hists: ValueHistograms, hs: tuple[tuple[int, int], ...], key) -> int:
    ck = (hs, key)
    if ck in hists._conv_cache:
        return hists._conv_cache[ck]
    if key == "all":
        val = prod(int(hists.hist[d].sum()) for d, _ in hs)
    else:
        arrays = [_scaled(hists, d, m) for d, m in hs]
        val = hists.conv_at(arrays, key)
    hists._conv_cache[ck] = val
    return val


def _scaled(hists: ValueHistograms, d: int, m: int) -> np.ndarray:
    F = hists.F
    image = F.vmul(np.arange(hists.q, dtype=np.int64), np.int64(F.from_int(m)))
    return _push(hists.hist[d], image, hists.q)
