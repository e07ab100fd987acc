from fractions import Fraction as F

import numpy as np
import pytest

from bernoulli_opmat import exact


def test_rational_array_normalises():
    a = exact.rational_array([1, F(2, 4), 3])
    assert a.dtype == object
    assert a[1] == F(1, 2) and a[1].denominator == 2


def test_identity_and_zeros():
    assert (exact.identity(3) == np.eye(3)).all()
    assert exact.zeros(2, 3).shape == (2, 3)


def test_is_rational():
    assert exact.is_rational([1, F(1, 3)])
    assert not exact.is_rational([1.0, 2])
    assert not exact.is_rational([True])


def test_solve_vector_and_matrix():
    a = exact.rational_array([[2, 1], [1, 3]])
    x = exact.solve(a, exact.rational_array([3, 5]))
    assert x.tolist() == [F(4, 5), F(7, 5)]
    inv = exact.inverse(a)
    assert (a @ inv == exact.identity(2)).all()


def test_solve_needs_pivoting():
    a = exact.rational_array([[0, 1], [1, 0]])
    assert exact.solve(a, exact.rational_array([2, 3])).tolist() == [3, 2]


def test_singular_rejected():
    with pytest.raises(exact.SingularMatrixError):
        exact.solve(exact.rational_array([[1, 2], [2, 4]]), exact.rational_array([1, 1]))


def test_hilbert_inverse_exact():
    n = 6
    h = exact.rational_array([[F(1, i + j + 1) for j in range(n)] for i in range(n)])
    assert (exact.inverse(h) @ h == exact.identity(n)).all()


def test_lower_triangular():
    assert exact.is_lower_triangular(exact.rational_array([[1, 0], [5, 1]]))
    assert not exact.is_lower_triangular(exact.rational_array([[1, 1], [0, 1]]))
