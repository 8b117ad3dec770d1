from fractions import Fraction as F

import numpy as np
import pytest

from arithcode.linalg import RationalMatrix


def test_basic_algebra_matches_numpy():
    A = RationalMatrix([[F(1, 2), 3], [F(-1, 3), F(5, 7)]])
    B = RationalMatrix([[2, F(1, 9)], [0, F(4, 5)]])
    fa = np.array([[float(x) for x in r] for r in A.rows])
    fb = np.array([[float(x) for x in r] for r in B.rows])
    for exact, approx in ((A @ B, fa @ fb), (A + B, fa + fb), (A - B, fa - fb), (A**5, np.linalg.matrix_power(fa, 5))):
        assert np.allclose([[float(x) for x in r] for r in exact.rows], approx, rtol=1e-12)


def test_power_zero_is_identity():
    A = RationalMatrix([[1, 2], [3, 4]])
    assert A**0 == RationalMatrix.identity(2)
    with pytest.raises(ValueError):
        A ** -1


def test_nullspace_exact():
    A = RationalMatrix([[1, 2, 3], [2, 4, 6], [1, 1, 1]])
    basis = A.nullspace()
    assert len(basis) == 1
    assert A.apply(basis[0]) == (0, 0, 0)
    assert RationalMatrix.identity(3).nullspace() == []


def test_triangular_predicates_and_json():
    L = RationalMatrix([[1, 0], [F(2, 3), 1]])
    assert L.is_lower_triangular() and not L.is_upper_triangular()
    assert L.transpose().is_upper_triangular()
    assert L.to_json() == [["1", "0"], ["2/3", "1"]]
    assert RationalMatrix.from_json(L.to_json()) == L


def test_rejects_non_square_and_floats():
    with pytest.raises(ValueError):
        RationalMatrix([[1, 2]])
    with pytest.raises(TypeError):
        RationalMatrix([[0.5]])
