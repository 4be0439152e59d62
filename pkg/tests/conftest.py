import pytest

from quiverdt.ncalg import Potential
from quiverdt.quiver import doubled_a2, one_loop, two_loop


def loop_potential(d: int) -> Potential:
    return Potential.from_named(one_loop(), {" ".join(["x"] * (d + 1)): 1})


def a2_potential(d: int) -> Potential:
    return Potential.from_named(doubled_a2(), {" ".join(["x y"] * (d + 1)): 1})


@pytest.fixture
def fixture_quivers():
    return {"one_loop": one_loop(), "two_loop": two_loop(), "doubled_a2": doubled_a2()}
