import pytest

from conftest import a2_potential, loop_potential
from oracles import FROZEN_COUNTS, one_loop_e1
from quiverdt.errors import BudgetError, CongruenceError, UnsupportedError
from quiverdt.fqrep import brute
from quiverdt.fqrep.count import exp_sum_count, framed_exp_sum_count
from quiverdt.fqrep.field import gl_order, prime_power
from quiverdt.ncalg import Potential
from quiverdt.quiver import doubled_a2, one_loop, two_loop

NAMED = {"x^3": loop_potential(2), "(xy)^2": a2_potential(1)}


@pytest.mark.parametrize("key", sorted(FROZEN_COUNTS))
def test_frozen_counts(key):
    name, gamma, q, m = key
    W = NAMED[name]
    if m:
        rep = framed_exp_sum_count(W.quiver, W, gamma, m, q, strict=False, method="brute")
    else:
        rep = exp_sum_count(W.quiver, W, gamma, q, strict=False, method="brute")
    assert (rep.N0, rep.N1, rep.total) == FROZEN_COUNTS[key]


def test_zero_potential_counts_everything():
    for Q, gamma, q in [(one_loop(), (2,), 3), (two_loop(), (1,), 5), (doubled_a2(), (1, 2), 3)]:
        rep = exp_sum_count(Q, Potential(Q, {}), gamma, q)
        assert rep.E == q ** Q.rep_dim(gamma) and rep.N1 == 0


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_one_loop_e1_closed_form(d):
    W = loop_potential(d)
    for q in range(2, 65):
        if prime_power(q) != (q, 1):
            continue
        rep = exp_sum_count(W.quiver, W, (1,), q, strict=False)
        assert rep.E == one_loop_e1(d, q), q


@pytest.mark.parametrize("W,gamma,q,m", [
    (loop_potential(1), (2,), 3, 0),
    (loop_potential(2), (2,), 4, 0),
    (loop_potential(2), (3,), 2, 0),
    (loop_potential(1), (2,), 5, 0),
    (loop_potential(2), (2,), 3, 1),
    (loop_potential(1), (2,), 3, 2),
    (a2_potential(1), (2, 1), 5, 0),
    (a2_potential(2), (1, 2), 4, 0),
    (a2_potential(1), (2, 2), 3, 0),
    (Potential.from_named(doubled_a2(), {"x y x y x y": 3}), (2, 1), 3, 0),
])
def test_class_sums_match_enumeration(W, gamma, q, m):
    kw = dict(strict=False)
    if m:
        a = framed_exp_sum_count(W.quiver, W, gamma, m, q, method="class", **kw)
        b = framed_exp_sum_count(W.quiver, W, gamma, m, q, method="brute", **kw)
    else:
        a = exp_sum_count(W.quiver, W, gamma, q, method="class", **kw)
        b = exp_sum_count(W.quiver, W, gamma, q, method="brute", **kw)
    assert (a.N0, a.N1, a.total) == (b.N0, b.N1, b.total)


@pytest.mark.parametrize("m", [1, 2])
@pytest.mark.parametrize("W,gamma,q", [
    (loop_potential(1), (2,), 3),
    (loop_potential(2), (2,), 4),
    (a2_potential(1), (1, 1), 5),
    (Potential.from_named(two_loop(), {"x y x y": 1}), (2,), 2),
])
def test_framed_counts_divisible_by_gl(W, gamma, q, m):
    rep = framed_exp_sum_count(W.quiver, W, gamma, m, q, strict=False)
    order = gl_order(gamma, q)
    assert rep.N0 % order == 0 and rep.N1 % order == 0 and rep.total % order == 0


def test_parallel_counts_equal_serial(monkeypatch):
    monkeypatch.setattr(brute, "CHUNK", 64)
    W = a2_potential(1)
    one = exp_sum_count(W.quiver, W, (2, 1), 5, method="brute", jobs=1)
    two = exp_sum_count(W.quiver, W, (2, 1), 5, method="brute", jobs=2)
    assert one == two


def test_strict_congruence_and_budget():
    W = loop_potential(2)
    with pytest.raises(CongruenceError):
        exp_sum_count(W.quiver, W, (1,), 5)
    with pytest.raises(BudgetError):
        exp_sum_count(W.quiver, W, (2,), 7, method="brute", budget=100)


def test_non_quasi_homogeneous_rejected():
    W = Potential.from_named(one_loop(), {"x x x": 1, "x x x x": 1})
    with pytest.raises(UnsupportedError):
        exp_sum_count(W.quiver, W, (1,), 7)


def test_report_fields():
    W = loop_potential(2)
    rep = exp_sum_count(W.quiver, W, (1,), 7)
    assert rep.modulus == 3 and rep.congruent
    assert rep.average == 1 and rep.invariant_part == 0 and rep.twisted_part == 2
    assert rep.as_dict()["E"] == -2
