from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hyperbethe import exact

Q = Fraction

small = st.fractions(min_value=-5, max_value=5, max_denominator=6)


def matrices(rows, cols):
    return st.lists(st.lists(small, min_size=cols, max_size=cols), min_size=rows, max_size=rows).map(exact.qmatrix)


def test_to_fraction_parses_strings_and_floats():
    assert exact.to_fraction("3/4") == Q(3, 4)
    assert exact.to_fraction(0.5) == Q(1, 2)
    assert exact.to_fraction(-2) == Q(-2)
    assert exact.fraction_str(Q(6, 3)) == "2/1"


def test_rref_and_rank():
    m = exact.qmatrix([[1, 2, 3], [2, 4, 6], [1, 0, 1]])
    red, piv = exact.rref(m)
    assert piv == [0, 1]
    assert exact.rank(m) == 2


def test_det_and_inverse():
    m = exact.qmatrix([[2, 1], [1, 1]])
    assert exact.det(m) == 1
    assert exact.is_zero(exact.inverse(m) @ m - exact.identity(2))


def test_solve_rejects_singular():
    with pytest.raises(ValueError):
        exact.solve(exact.qmatrix([[1, 1], [1, 1]]), exact.qvector([1, 2]))


@given(matrices(3, 5))
@settings(max_examples=40, deadline=None)
def test_nullspace_is_kernel_with_full_dimension(m):
    ker = exact.nullspace(m)
    assert ker.shape[1] == 5 - exact.rank(m)
    assert exact.is_zero(m @ ker)


@given(matrices(4, 3), matrices(3, 4))
@settings(max_examples=40, deadline=None)
def test_integer_matmul_matches_fraction_product(a, b):
    assert exact.is_zero(exact.matmul(a, b) - a @ b)


@given(matrices(3, 3))
@settings(max_examples=30, deadline=None)
def test_commutes_with_own_powers(a):
    assert exact.commutes(a, a @ a + 3 * a)


def test_restrict_to_span_invariant_and_not():
    basis = exact.qmatrix([[1, 0], [0, 1], [1, 1]])
    op = exact.qmatrix([[2, 0, 0], [0, 3, 0], [0, 0, 0]])
    with pytest.raises(ValueError):
        exact.restrict_to_span(op, basis)
    op = exact.qmatrix([[1, 1, 0], [0, 2, 0], [1, 3, 0]])
    r = exact.restrict_to_span(op, basis)
    assert exact.is_zero(op @ basis - basis @ r)


def test_subspace_intersection():
    a = exact.qmatrix([[1, 0], [0, 1], [0, 0]])
    b = exact.qmatrix([[1, 0], [0, 0], [0, 1]])
    inter = exact.subspace_intersection(a, b)
    assert inter.shape[1] == 1
    assert np.array_equal(exact.to_float(inter[:, 0]) != 0, [True, False, False])
