import pytest

from conicrat.algebra.fields import PrimeField, QuadraticRationals, Rationals
from conicrat.algebra.parse import parse_poly

QQ = Rationals()
F3, F5, F7 = PrimeField(3), PrimeField(5), PrimeField(7)


def poly(text, K=QQ):
    return parse_poly(text, K)


@pytest.fixture
def qq():
    return QQ


@pytest.fixture(params=[3, 5, 7])
def gf(request):
    return PrimeField(request.param)


@pytest.fixture
def q_sqrt3():
    return QuadraticRationals(3)
