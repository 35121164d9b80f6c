from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from hyperbethe import fixtures
from hyperbethe.arrangement import (ArrangementFamily, classify_fiber, enumerate_circuits, euler_characteristic,
                                    intersection_poset, unbalanced_status)

Q = Fraction


def test_triangle_has_one_circuit_and_chi_one():
    fam, z = fixtures.triangle()
    (c,) = enumerate_circuits(fam)
    assert c.support == (0, 1, 2)
    assert c.syzygy == (1, 1, 1)
    assert c.evaluate(z) == 1
    assert euler_characteristic(fam, z) == 1


def test_pair_syzygy_normalized():
    fam, z = fixtures.pair()
    (c,) = enumerate_circuits(fam)
    assert c.syzygy == (1, -1)
    assert c.evaluate(z) == 1
    assert classify_fiber(fam, [c], [1, 1]).kind == "bad"


def test_four_lines_bad_fiber_vanishing_circuit():
    fam, z0 = fixtures.four_lines()
    cls = classify_fiber(fam, enumerate_circuits(fam), z0)
    assert not cls.is_good
    assert [c.support for c in cls.vanishing_circuits] == [(0, 1, 2)]


def test_generic_lines_chi():
    fam, z = fixtures.four_generic_lines()
    assert classify_fiber(fam, enumerate_circuits(fam), z).is_good
    assert euler_characteristic(fam, z) == 1 - 4 + comb(4, 2)


def test_characteristic_polynomial_of_triangle():
    fam, z = fixtures.triangle()
    assert intersection_poset(fam, z).characteristic_polynomial() == {2: 1, 1: -3, 0: 3}


def test_validation():
    with pytest.raises(ValueError):
        ArrangementFamily.from_rows([[1, 0], [0, 0], [1, 1]])
    with pytest.raises(ValueError):
        ArrangementFamily.from_rows([[1, 0], [2, 0], [3, 0]])
    with pytest.raises(ValueError):
        ArrangementFamily.from_rows([[1], [1]], [1, 0])
    with pytest.raises(ValueError):
        ArrangementFamily.from_rows([[1, 0], [0, 1]])


def test_unbalanced_status():
    fam, _ = fixtures.triangle()
    assert unbalanced_status(fam) == "unbalanced"
    assert unbalanced_status(fam.with_weights([1, 1, -2])) == "balanced"
    assert unbalanced_status(fam.with_weights([1, 1, -1])) == "unknown"


@given(st.integers(0, 10 ** 6))
@settings(max_examples=25, deadline=None)
def test_circuits_are_minimal_syzygies(seed):
    fam, _ = fixtures.random_family(seed, n_max=6, k_max=3)
    for c in enumerate_circuits(fam):
        assert c.syzygy[0] == 1
        total = [sum(lam * fam.linear_parts[i][col] for i, lam in zip(c.support, c.syzygy)) for col in range(fam.k)]
        assert all(v == 0 for v in total)
        assert fam.rank_of(c.support) == len(c.support) - 1
        for drop in c.support:
            rest = [i for i in c.support if i != drop]
            assert fam.is_independent(rest)


@given(st.integers(0, 10 ** 6))
@settings(max_examples=25, deadline=None)
def test_chi_alternates_sum_of_mobius(seed):
    fam, z = fixtures.random_family(seed, n_max=6, k_max=2)
    poly = intersection_poset(fam, z).characteristic_polynomial()
    assert sum(poly.values()) == euler_characteristic(fam, z)
    assert poly[fam.k] == 1
