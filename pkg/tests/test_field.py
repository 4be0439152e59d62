import cmath
import itertools

import pytest

from quiverdt.errors import ArgumentError
from quiverdt.fqrep.field import FiniteField, field_make, gl_order, prime_power
from quiverdt.fqrep.gauss import gauss_datum, pure_gauss_fields


@pytest.mark.parametrize("q", [2, 3, 4, 5, 8, 9, 16, 25, 27, 49])
def test_field_axioms(q):
    F = FiniteField.of_size(q)
    els = range(q)
    for a, b in itertools.product(els, repeat=2):
        assert F.add(a, b) == F.add(b, a)
        assert F.mul(a, b) == F.mul(b, a)
        assert F.sub(F.add(a, b), b) == a
    for a in els:
        if a:
            assert F.mul(a, F.inv(a)) == 1
            assert F.power(a, q - 1) == 1
    for a, b, c in itertools.islice(itertools.product(els, repeat=3), 0, None, 7):
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))


def test_field_cache_and_errors():
    assert field_make(3, 2) is field_make(3, 2)
    assert prime_power(12) is None and prime_power(125) == (5, 3)
    with pytest.raises(ArgumentError):
        FiniteField.of_size(6)


def test_gl_order():
    assert gl_order((1,), 5) == 4
    assert gl_order((2,), 2) == 6
    assert gl_order((1, 2), 3) == 2 * 48


def _complex_gauss_sums(p, M):
    """Gauss sums of the nontrivial characters of order dividing M over F_p, numerically."""
    g = next(x for x in range(2, p) if all(pow(x, (p - 1) // r, p) != 1 for r in _prime_factors(p - 1)))
    log = {pow(g, i, p): i for i in range(p - 1)}
    out = []
    for j in range(1, M):
        k = j * (p - 1) // M
        total = sum(cmath.exp(2j * cmath.pi * k * log[x] / (p - 1)) * cmath.exp(2j * cmath.pi * x / p)
                    for x in range(1, p))
        out.append(total)
    return out


def _prime_factors(n):
    out, d = set(), 2
    while d * d <= n:
        while n % d == 0:
            out.add(d)
            n //= d
        d += 1
    if n > 1:
        out.add(n)
    return out


@pytest.mark.parametrize("M", [2, 3, 4])
def test_gauss_datum_matches_complex_sums(M):
    for p in [x for x in range(3, 62) if prime_power(x) == (x, 1) and (x - 1) % M == 0]:
        sums = _complex_gauss_sums(p, M)
        uniform_real = all(abs(s.imag) < 1e-6 and abs(s - sums[0]) < 1e-6 for s in sums)
        datum = gauss_datum(p, M)
        assert (datum is not None) == uniform_real, p
        if datum is not None:
            assert round(sums[0].real / p ** 0.5) == datum.sign


def test_pure_field_lists():
    assert pure_gauss_fields(2, 30) == [5, 9, 13, 17, 25, 29]
    assert pure_gauss_fields(3, 300) == [4, 16, 25, 64, 121, 256, 289]
    assert pure_gauss_fields(4, 2500) == [49, 81, 529, 961, 2209, 2401]
    assert gauss_datum(7, 3) is None
    assert gauss_datum(7, 1).sign == 1


def test_line_element_is_minus_gauss_sum():
    d = gauss_datum(5, 2)
    assert d.sign == 1
    assert d.line_element == -d.gauss_sum
