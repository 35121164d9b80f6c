from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from hyperbethe import exact, fixtures
from hyperbethe.arrangement import enumerate_circuits, euler_characteristic
from hyperbethe.flags import FlagSpace, contravariant_pair, degenerate_subspaces, permutation_sign, sing_basis

Q = Fraction


def test_permutation_sign():
    assert permutation_sign((0, 1, 2)) == 1
    assert permutation_sign((1, 0, 2)) == -1
    assert permutation_sign((2, 0, 1)) == 1


def test_triangle_sing_vector():
    fam, _ = fixtures.triangle()
    sb = sing_basis(fam)
    assert sb.dim == 1
    v = sb.matrix[:, 0]
    # kernel of delta: coefficients of F(1,2), F(1,3), F(2,3) up to scale
    assert list(v / v[0]) == [1, -1, 1]


def test_gram_is_product_of_weights():
    fam, _ = fixtures.triangle(weights=(2, 3, 5))
    gram = FlagSpace(fam).gram
    assert gram.diagonal == (6, 10, 15)
    u = FlagSpace(fam).to_vector([1, 0, 1])
    assert contravariant_pair(gram, u, u) == 21


def test_sing_json_roundtrip_shape():
    fam, _ = fixtures.four_lines()
    js = sing_basis(fam).to_json()
    assert js["dim"] == 3 and js["ambient"] == "good"
    assert all("subset" in e and "/" in e["coeff"] for v in js["basis"] for e in v)


def test_four_lines_degenerate_dimensions():
    fam, z0 = fixtures.four_lines()
    deg = degenerate_subspaces(fam, enumerate_circuits(fam), z0)
    assert deg.flags.dim == 5
    assert deg.sing.dim == 2
    assert deg.sing.dim == abs(euler_characteristic(fam, z0))


def test_degenerate_rejects_good_fiber():
    fam, z = fixtures.triangle()
    with pytest.raises(ValueError):
        degenerate_subspaces(fam, enumerate_circuits(fam), z)


def test_differential_squares_to_zero():
    fam, _ = fixtures.random_family(3, n_max=7, k=3)
    space = FlagSpace(fam)
    for p in range(2, fam.k + 1):
        assert exact.is_zero(space.differential(p) @ space.differential(p - 1))


@given(st.integers(0, 10 ** 6))
@settings(max_examples=20, deadline=None)
def test_sing_dimension_equals_abs_chi_for_positive_weights(seed):
    fam, z = fixtures.random_family(seed, n_max=6, k_max=3)
    assert sing_basis(fam).dim == abs(euler_characteristic(fam, z))


@given(st.integers(0, 10 ** 6))
@settings(max_examples=20, deadline=None)
def test_sing_vectors_are_killed_by_delta(seed):
    fam, _ = fixtures.random_family(seed, n_max=6, k_max=3, positive=False)
    space = FlagSpace(fam)
    assert exact.is_zero(space.delta @ space.sing_matrix)
