import pytest

import richlines as rl
from richlines.numberfield import Element
from richlines.geometry import Point


@pytest.fixture(scope="session")
def integers():
    return rl.build_integers_basis()


@pytest.fixture(scope="session")
def sqrt2():
    return rl.build_quadratic_basis(2)


@pytest.fixture(scope="session")
def cbrt2():
    return rl.build_power_basis([-2, 0, 0])


def make_point(basis, xcoords, ycoords):
    return Point(Element(basis, xcoords), Element(basis, ycoords))


def int_point(basis, x, y):
    """Degree-1 convenience: a point (x, y) over the integers basis."""
    return Point(Element(basis, (x,)), Element(basis, (y,)))
