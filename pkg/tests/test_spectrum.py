from fractions import Fraction as Fr

import pytest

from quiverdt.errors import ArgumentError
from quiverdt.jacobi import local_milnor
from quiverdt.laurent import LaurentInS
from quiverdt.spectrum import (
    BivariatePoly, SpectrumTable, polynomial_spectrum, refined_gv_poly, specialize, steenbrink_spectrum,
)

POLYS = ["x^2", "x^3", "x^5", "x^3 + y^3", "x^2 + y^4", "x^3 + y^4", "x^4 + y^4", "x^2*y + y^4",
         "x^3 + x*y^3", "x^5 + y^3"]


@pytest.mark.parametrize("d", range(1, 7))
def test_width_spectrum(d):
    S = steenbrink_spectrum([1], d + 1)
    assert S.spectral_numbers == tuple(Fr(i, d + 1) for i in range(1, d + 1))


def test_two_variable_cubic():
    S = polynomial_spectrum("x^3 + y^3")
    assert S.spectral_numbers == (Fr(2, 3), Fr(1), Fr(1), Fr(4, 3))
    P = refined_gv_poly(S)
    assert P.terms == {(Fr(-1, 3), Fr(1, 3)): 1, (Fr(0), Fr(0)): 2, (Fr(1, 3), Fr(-1, 3)): 1}


def test_smooth_and_empty():
    assert steenbrink_spectrum([1], 1).mu == 0
    assert refined_gv_poly(SpectrumTable((), 1)).is_zero()
    assert specialize(BivariatePoly({}), "chi") == 0


def test_rejections():
    with pytest.raises(ArgumentError):
        steenbrink_spectrum([2], 3)
    with pytest.raises(ArgumentError):
        polynomial_spectrum("x^3 + x^4")
    with pytest.raises(ArgumentError):
        specialize(BivariatePoly({}), "other")


@pytest.mark.parametrize("f", POLYS)
def test_spectrum_properties(f):
    S = polynomial_spectrum(f)
    assert S.is_symmetric()
    assert S.mu == local_milnor(f)
    P = refined_gv_poly(S)
    assert P.swapped() == P
    wtm = specialize(P, "wtm")
    assert wtm.evaluate(1) == specialize(P, "chi") == S.mu


@pytest.mark.parametrize("d", range(1, 5))
def test_width_specialisations(d):
    P = refined_gv_poly(steenbrink_spectrum([1], d + 1))
    assert specialize(P, "chi") == d
    assert specialize(P, "wtm") == LaurentInS.constant(d, var="q^(1/2)")
