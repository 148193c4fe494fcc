from fractions import Fraction

import numpy as np

from src.utils.linalg_utils import (kernel_exact, kernel_float, rank_exact, rank_float, rref_exact, to_exact_array,
                                    to_float_array)


def test_rank_exact_with_fractions():
    m = to_exact_array([[Fraction(1, 2), 1, 0], [1, 2, 0], [0, 0, Fraction(1, 3)]])
    assert rank_exact(m) == 2


def test_rank_exact_of_empty_matrix():
    assert rank_exact(to_exact_array([], columns=4)) == 0


def test_rank_exact_matches_float_rank_on_integer_matrices():
    rng = np.random.default_rng(7)
    for rows, cols, inner in [(5, 7, 3), (6, 6, 6), (8, 4, 2)]:
        m = rng.integers(-9, 10, size=(rows, inner)) @ rng.integers(-9, 10, size=(inner, cols))
        exact = to_exact_array(m.tolist())
        assert rank_exact(exact) == rank_float(to_float_array(exact)) == np.linalg.matrix_rank(m)


def test_rref_exact():
    reduced, pivots = rref_exact(to_exact_array([[2, 4], [1, 2]]))
    assert pivots == [0]
    assert list(reduced[0]) == [1, 2]
    assert list(reduced[1]) == [0, 0]


def test_kernel_exact_is_annihilated():
    m = to_exact_array([[1, 2, 3], [2, 4, Fraction(1, 2)]])
    basis = kernel_exact(m)
    assert len(basis) == 1
    for vector in basis:
        assert all(sum(a * b for a, b in zip(row, vector)) == 0 for row in m)


def test_kernel_exact_of_empty_matrix_is_everything():
    assert kernel_exact(to_exact_array([], columns=2), columns=2) == [[1, 0], [0, 1]]


def test_kernel_float_is_orthonormal():
    m = np.array([[1.0, 1.0, 0.0]])
    kernel = kernel_float(m)
    assert kernel.shape == (3, 2)
    np.testing.assert_allclose(kernel.T @ kernel, np.eye(2), atol=1e-12)
    np.testing.assert_allclose(m @ kernel, 0, atol=1e-12)


def test_rank_float_tolerance():
    m = np.diag([1.0, 1e-12, 0.0])
    assert rank_float(m) == 1
    assert rank_float(m, tol_rel=1e-15) == 2
