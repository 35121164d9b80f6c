from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hyperbethe import exact, fixtures
from hyperbethe.arrangement import euler_characteristic
from hyperbethe.critical import (NewtonError, ResiduePairing, algebra_correspondence, enumerate_bounded_regions,
                                 generated_algebra_dimension, master_eval, solve_critical_points, special_vector,
                                 verify_hessian_norm_and_orthogonality)
from hyperbethe.flags import FlagSpace
from hyperbethe.hamiltonians import HamiltonianFamily

Q = Fraction


def test_master_eval_exact_triangle():
    fam, z = fixtures.triangle()
    ev = master_eval(fam, z, [Q(1, 3), Q(1, 3)])
    assert ev.gradient == [0, 0]
    assert ev.hess_det == 243


def test_master_eval_rejects_hyperplane():
    fam, z = fixtures.triangle()
    with pytest.raises(ValueError):
        master_eval(fam, z, [0, Q(1, 2)])


def test_pair_critical_point_closed_form():
    # 2 log t + 3 log(t - 1): 2/t + 3/(t - 1) = 0 at t = 2/5
    fam, z = fixtures.pair()
    (cp,) = solve_critical_points(fam, z)
    assert cp.t_exact == (Q(2, 5),)
    assert cp.is_rational and cp.gradient_residual == 0


def test_triangle_region_and_special_vector():
    fam, z = fixtures.triangle()
    (cell,) = enumerate_bounded_regions(fam, z)
    assert cell.bounded
    v = special_vector(fam, z, [Q(1, 3), Q(1, 3)])
    space = FlagSpace(fam)
    assert exact.is_zero(space.delta @ v)
    assert space.gram.pair_arrays(list(v), list(v)) == 243


def test_four_generic_lines_regions_match_chi():
    fam, z = fixtures.four_generic_lines()
    regions = enumerate_bounded_regions(fam, z)
    assert len(regions) == abs(euler_characteristic(fam, z)) == 3
    points = solve_critical_points(fam, z, regions=regions)
    assert sorted(p.region for p in points) == [0, 1, 2]
    assert all(p.gradient_residual <= 1e-12 for p in points)


def test_solver_requires_positive_weights():
    fam, z = fixtures.triangle(weights=(1, 1, -1))
    with pytest.raises((ValueError, NewtonError)):
        solve_critical_points(fam, z)


def test_residue_pairing():
    rp = ResiduePairing({0: Q(4)})
    assert rp.unit(0) == Q(1, 4)
    assert rp.pair(0, 2, 3) == Q(3, 2)
    assert list(rp.alpha_one(0, np.array([Q(2)], dtype=object))) == [Q(1, 2)]


def test_generated_algebra_dimension():
    diag = exact.qmatrix([[1, 0, 0], [0, 2, 0], [0, 0, 3]])
    assert generated_algebra_dimension([diag]) == 3
    nil = exact.qmatrix([[0, 1], [0, 0]])
    assert generated_algebra_dimension([nil]) == 2
    assert generated_algebra_dimension([exact.identity(2)]) == 1
    assert generated_algebra_dimension([nil, nil.T]) == 4


@given(st.integers(0, 10 ** 6))
@settings(max_examples=8, deadline=None)
def test_census_on_random_planar_families(seed):
    fam, z = fixtures.random_family(seed, n_max=6, k=2)
    regions = enumerate_bounded_regions(fam, z)
    points = solve_critical_points(fam, z, regions=regions)
    assert len(points) == len(regions) == abs(euler_characteristic(fam, z))
    assert all(p.gradient_residual <= 1e-12 for p in points)
    rep = verify_hessian_norm_and_orthogonality(fam, z, points, regions=regions, n_random=3)
    assert all(o["relative"] <= 1e-8 for o in rep["orthogonality"])
    alg = algebra_correspondence(fam, z, points, hf=HamiltonianFamily(fam))
    assert alg["algebra_dim"] == alg["sing_dim"] == len(points)


@given(st.integers(0, 10 ** 6))
@settings(max_examples=15, deadline=None)
def test_special_vector_norm_is_signed_hessian_everywhere(seed):
    fam, z = fixtures.random_family(seed, n_max=6, k_max=3, positive=False)
    rng = np.random.default_rng(seed)
    t = [Q(int(rng.integers(-50, 50)), 13) for _ in range(fam.k)]
    if any(v == 0 for v in fam.f(z, t)):
        return
    v = special_vector(fam, z, t)
    assert FlagSpace(fam).gram.pair_arrays(list(v), list(v)) == (-1) ** fam.k * master_eval(fam, z, t).hess_det
