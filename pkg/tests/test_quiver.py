import itertools

import pytest
from hypothesis import given, settings, strategies as st

from oracles import f2_simple_oracle, is_absolutely_simple
from quiverdt.errors import ArgumentError, DimensionError, InputError
from quiverdt.quiver import Quiver, doubled_a2, one_loop, two_loop

QUIVERS = [one_loop(), two_loop(), doubled_a2()]


def test_euler_form_examples():
    assert one_loop().euler_form((1,), (1,)) == 0
    assert two_loop().euler_form((2,), (2,)) == -4
    assert doubled_a2().euler_form((1, 1), (1, 1)) == 0


def test_rep_dim_matches_euler_form():
    for Q in QUIVERS:
        for g in itertools.product(range(5), repeat=Q.vertex_count):
            assert Q.rep_dim(g) + Q.euler_form(g, g) == sum(x * x for x in g)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(QUIVERS), st.data())
def test_euler_form_bilinear_and_symmetric(Q, data):
    vec = st.lists(st.integers(0, 4), min_size=Q.vertex_count, max_size=Q.vertex_count)
    g, d, h = (tuple(data.draw(vec)) for _ in range(3))
    gd = tuple(a + b for a, b in zip(g, d))
    assert Q.euler_form(gd, h) == Q.euler_form(g, h) + Q.euler_form(d, h)
    assert Q.euler_form(g, h) == Q.euler_form(h, g)


def test_length_mismatch_is_dimension_error():
    with pytest.raises(DimensionError):
        doubled_a2().euler_form((1,), (1, 1))


def test_invalid_quivers_rejected():
    with pytest.raises(InputError):
        Quiver.from_arrows(1, [("x", 0, 0), ("x", 0, 0)])
    with pytest.raises(InputError):
        Quiver.from_arrows(1, [("x", 0, 1)])


def test_symmetry_predicate():
    assert doubled_a2().is_symmetric()
    assert not Quiver.from_arrows(2, [("x", 0, 1)]).is_symmetric()


def test_frame_examples():
    Qf, g = one_loop().frame((2,), 1)
    assert Qf.vertex_count == 2 and len(Qf.arrows) == 2 and g == (2, 1)
    Qf, g = one_loop().frame((1,), 3)
    assert len(Qf.arrows) == 4 and g == (1, 1)
    assert sum(1 for a in Qf.arrows if a.source == 1) == 3
    Qf, g = doubled_a2().frame((1, 1), 2)
    assert len(Qf.arrows) == 6 and g == (1, 1, 1)
    with pytest.raises(ArgumentError):
        one_loop().frame((1,), 0)


@pytest.mark.parametrize("Q", QUIVERS)
@pytest.mark.parametrize("m", [1, 2, 3])
def test_frame_adds_m_per_dimension(Q, m):
    for g in itertools.product(range(3), repeat=Q.vertex_count):
        Qf, gf = Q.frame(g, m)
        assert Qf.rep_dim(gf) == Q.rep_dim(g) + m * sum(g)


def test_simple_exists_examples():
    assert one_loop().simple_exists((1,))
    assert not one_loop().simple_exists((2,))
    assert two_loop().simple_exists((3,))
    assert not doubled_a2().simple_exists((2, 1))
    assert doubled_a2().simple_exists((1, 1))
    with pytest.raises(ArgumentError):
        one_loop().simple_exists((0,))


def test_disconnected_support_has_no_simple():
    Q = Quiver.from_arrows(2, [("x", 0, 0), ("y", 1, 1)])
    assert not Q.simple_exists((1, 1))


def test_two_loop_dimension_three_oracle():
    # x companion of t^3 + t + 1, y an elementary idempotent; no invariant subspace over F_8
    x = [[0, 0, 1], [1, 0, 1], [0, 1, 0]]
    y = [[1, 0, 0], [0, 0, 0], [0, 0, 0]]
    assert is_absolutely_simple(two_loop(), (3,), [x, y], 3)


def test_a2_dimension_21_oracle():
    assert not f2_simple_oracle(doubled_a2(), (2, 1))


@pytest.mark.parametrize("Q", QUIVERS)
def test_simple_exists_agrees_with_f2_oracle(Q):
    for g in itertools.product(range(3), repeat=Q.vertex_count):
        if 0 < sum(g) <= 2:
            assert Q.simple_exists(g) == f2_simple_oracle(Q, g), g
