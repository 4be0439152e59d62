"""Finite fields F_{p^k} (q <= 4096) with table arithmetic, scalar and vectorised."""

from __future__ import annotations

from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import product

import numpy as np

from ..errors import ArgumentError, BudgetError

MAX_FIELD = 4096


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def prime_power(q: int) -> tuple[int, int] | None:
    """(p, k) with q = p^k, or None."""
    if q < 2:
        return None
    p = 2
    while p * p <= q and q % p:
        p += 1
    if q % p:
        p = q
    k, r = 0, q
    while r % p == 0:
        r //= p
        k += 1
    return (p, k) if r == 1 else None


# --- polynomials over F_p as coefficient lists, low degree first --------------------


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _polymod(a: list[int], m: list[int], p: int) -> list[int]:
    a = _trim([x % p for x in a])
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) >= len(m):
        f = a[-1] * inv_lead % p
        shift = len(a) - len(m)
        for i, c in enumerate(m):
            a[shift + i] = (a[shift + i] - f * c) % p
        _trim(a)
    return a


def _polymulmod(a: list[int], b: list[int], m: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _polymod(out, m, p)


def _polypowmod(a: list[int], e: int, m: list[int], p: int) -> list[int]:
    result = [1]
    base = _polymod(a, m, p)
    while e:
        if e & 1:
            result = _polymulmod(result, base, m, p)
        base = _polymulmod(base, base, m, p)
        e >>= 1
    return result


def _polygcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim([x % p for x in a]), _trim([x % p for x in b])
    while b:
        a, b = b, _polymod(a, b, p)
    return a


def _is_irreducible(m: list[int], p: int) -> bool:
    k = len(m) - 1
    x = [0, 1]
    if _polypowmod(x, p**k, m, p) != _polymod(x, m, p):
        return False
    for r in range(2, k + 1):
        if k % r == 0 and is_prime(r):
            h = _polypowmod(x, p ** (k // r), m, p)
            h = h + [0] * max(0, 2 - len(h))
            h[1] = (h[1] - 1) % p
            if len(_polygcd(m, _trim(h), p)) > 1:
                return False
    return True


@lru_cache(maxsize=None)
def least_irreducible(p: int, k: int) -> tuple[int, ...]:
    """Least monic irreducible of degree k, ordering by (c_{k-1}, ..., c_0) lexicographically."""
    if k == 1:
        return (0, 1)
    for high_to_low in product(range(p), repeat=k):
        coeffs = list(reversed(high_to_low)) + [1]
        if coeffs[0] == 0:
            continue
        if _is_irreducible(coeffs, p):
            return tuple(coeffs)
    raise AssertionError("no irreducible polynomial found")


class FiniteField:
    """F_q with elements encoded as integers whose base-p digits are polynomial coefficients."""

    def __init__(self, p: int, k: int = 1):
        if not is_prime(p):
            raise ArgumentError(f"{p} is not prime")
        if k < 1:
            raise ArgumentError("extension degree must be positive")
        if p**k > MAX_FIELD:
            raise BudgetError(f"field size {p}^{k} exceeds the table limit {MAX_FIELD}")
        self.p, self.k, self.q = p, k, p**k
        self.modulus = least_irreducible(p, k)
        self._build()

    @classmethod
    def of_size(cls, q: int) -> "FiniteField":
        pk = prime_power(q)
        if pk is None:
            raise ArgumentError(f"{q} is not a prime power")
        return _cached_field(*pk)

    def __repr__(self):
        return f"FiniteField({self.p}, {self.k})"

    def __eq__(self, other):
        return isinstance(other, FiniteField) and (self.p, self.k) == (other.p, other.k)

    def __hash__(self):
        return hash((self.p, self.k))

    # -- construction --------------------------------------------------------------
    def _build(self) -> None:
        p, k, q = self.p, self.k, self.q
        self.digits = np.array([[(a // p**i) % p for i in range(k)] for a in range(q)], dtype=np.int64)
        self._place = p ** np.arange(k, dtype=np.int64)
        # multiplication by x on digit vectors
        m = self.modulus

        def times_x(v: list[int]) -> list[int]:
            carry = v[-1]
            shifted = [0] + v[:-1]
            return [(shifted[i] - carry * m[i]) % p for i in range(k)]

        def encode(v) -> int:
            return int(sum(int(d) * p**i for i, d in enumerate(v)))

        def mul_elem(a: int, b: int) -> int:
            av = [int(x) for x in self.digits[a]]
            bv = [int(x) for x in self.digits[b]]
            acc = [0] * k
            cur = av
            for i in range(k):
                if bv[i]:
                    acc = [(acc[j] + bv[i] * cur[j]) % p for j in range(k)]
                cur = times_x(cur)
            return encode(acc)

        order = q - 1
        factors = [r for r in range(2, order + 1) if order % r == 0 and is_prime(r)]
        gen = None
        for g in range(2 if q > 2 else 1, q):
            powers_ok = True
            for r in factors:
                e, x, base = order // r, 1, g
                while e:
                    if e & 1:
                        x = mul_elem(x, base)
                    base = mul_elem(base, base)
                    e >>= 1
                if x == 1:
                    powers_ok = False
                    break
            if powers_ok:
                gen = g
                break
        assert gen is not None
        self.generator = gen
        exp = np.zeros(2 * order + 1, dtype=np.int64)
        x = 1
        for i in range(order):
            exp[i] = x
            x = mul_elem(x, gen)
        exp[order:2 * order] = exp[:order]
        exp[2 * order] = exp[0]
        log = np.full(q, -1, dtype=np.int64)
        log[exp[:order]] = np.arange(order)
        assert (log[1:] >= 0).all(), "generator search failed"
        self.exp_table = exp
        self.log_table = log
        self.neg_table = ((-self.digits) % p) @ self._place

    # -- scalar interface (used by generic matrix code) ----------------------------
    zero = 0
    one = 1

    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        return int((((self.digits[a] + self.digits[b]) % self.p) @ self._place))

    def neg(self, a: int) -> int:
        return int(self.neg_table[a])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return int(self.exp_table[self.log_table[a] + self.log_table[b]])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in a finite field")
        return int(self.exp_table[(-self.log_table[a]) % (self.q - 1)])

    def power(self, a: int, e: int) -> int:
        if e == 0:
            return 1
        if a == 0:
            return 0
        return int(self.exp_table[(self.log_table[a] * e) % (self.q - 1)])

    def coerce(self, x) -> int:
        if isinstance(x, (int, np.integer)) and 0 <= int(x) < self.q:
            return int(x)
        raise ArgumentError(f"{x!r} is not an element of F_{self.q}")

    def from_int(self, n: int) -> int:
        return n % self.p

    def from_rational(self, c) -> int:
        c = Fraction(c)
        if c.denominator % self.p == 0:
            raise ArgumentError(f"coefficient {c} has a denominator divisible by p = {self.p}")
        return self.mul(self.from_int(c.numerator), self.inv(self.from_int(c.denominator)))

    # -- vectorised interface ------------------------------------------------------
    @cached_property
    def add_table(self) -> np.ndarray:
        q = self.q
        dtype = np.int16 if q <= 32767 else np.int32
        if self.k == 1:
            r = np.arange(q)
            return ((r[:, None] + r[None, :]) % q).astype(dtype)
        d = self.digits
        return ((((d[:, None, :] + d[None, :, :]) % self.p) @ self._place)).astype(dtype)

    @cached_property
    def mul_table(self) -> np.ndarray:
        q = self.q
        lg = self.log_table
        t = self.exp_table[(lg[:, None] + lg[None, :]) % (q - 1)]
        t[0, :] = 0
        t[:, 0] = 0
        return t.astype(np.int16 if q <= 32767 else np.int32)

    def vadd(self, a, b):
        if self.k == 1:
            return (np.asarray(a, dtype=np.int64) + b) % self.p
        return self.add_table[a, b].astype(np.int64)

    def vneg(self, a):
        return self.neg_table[a]

    def vsub(self, a, b):
        return self.vadd(a, self.neg_table[b])

    def vmul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.k == 1:
            return (a * b) % self.p
        out = self.exp_table[self.log_table[a] + self.log_table[b]]
        return np.where((a == 0) | (b == 0), 0, out)

    def vpow(self, a, e: int):
        a = np.asarray(a, dtype=np.int64)
        if e == 0:
            return np.ones_like(a)
        out = self.exp_table[(self.log_table[a] * e) % (self.q - 1)]
        return np.where(a == 0, 0, out)

    @cached_property
    def trace_table(self) -> np.ndarray:
        """Absolute trace F_q -> F_p of every element, as integers mod p."""
        a = np.arange(self.q, dtype=np.int64)
        acc = np.zeros(self.q, dtype=np.int64)
        cur = a
        for _ in range(self.k):
            acc = self.vadd(acc, cur)
            cur = self.vpow(cur, self.p)
        assert (acc < self.p).all()
        return acc

    @cached_property
    def is_square_order(self) -> bool:
        return self.k % 2 == 0


@lru_cache(maxsize=64)
def _cached_field(p: int, k: int) -> FiniteField:
    return FiniteField(p, k)


def field_make(p: int, k: int = 1) -> FiniteField:
    if not is_prime(p):
        raise ArgumentError(f"{p} is not prime")
    if k < 1 or p**k > MAX_FIELD:
        raise BudgetError(f"field size {p}^{k} outside the supported range 2..{MAX_FIELD}")
    return _cached_field(p, k)


def gl_order(gamma, q: int) -> int:
    """|GL_gamma(F_q)| = prod_i q^{n(n-1)/2} prod_{j=1}^{n} (q^j - 1)."""
    total = 1
    for n in gamma:
        total *= q ** (n * (n - 1) // 2)
        for j in range(1, n + 1):
            total *= q**j - 1
    return total
