from fractions import Fraction

import pytest

PS = [Fraction(1, 3), Fraction(1, 2), Fraction(2, 3), Fraction(2, 5), Fraction(9, 10)]


@pytest.fixture(params=PS, ids=str)
def p(request):
    return request.param
