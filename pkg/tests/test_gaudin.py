from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from hyperbethe import exact
from hyperbethe.gaudin import (GaudinData, TensorModule, antisymmetrizer, build_discriminantal, check_gaudin,
                               dphi_and_gl2_bethe, dphi_coefficients, gaudin_hamiltonians,
                               geometric_vs_gaudin_spectra, gl2_operators, module_for, sk_action, sk_elements,
                               solve_discriminantal, weight_function, weight_function_and_bethe)
from hyperbethe.gaudin.bethe import compositions, gaudin_eigenvalue
from hyperbethe.gaudin.discriminantal import check_master_function, gaudin_master_gradient, group_order
from hyperbethe.hamiltonians import VerificationError

Q = Fraction


def _spectrum(m):
    return sorted(np.linalg.eigvals(exact.to_float(m)).real)


def test_module_relations_and_shapovalov():
    for algebra, hw in (("sl2", [1, 2]), ("gl2", [2, 1])):
        m = TensorModule(algebra, hw)
        m.check_relations()
        m.check_shapovalov()


def test_verma_needs_truncation():
    with pytest.raises(ValueError):
        TensorModule("sl2", [-1, 1])


def test_shapovalov_norms():
    m = TensorModule("sl2", [3])
    assert [m.factor_norm(0, i) for i in range(4)] == [1, 3, 12, 36]


def test_two_spin_half_spectrum():
    m = TensorModule("sl2", [1, 1])
    K1, K2 = gaudin_hamiltonians(m, [0, 1])
    # triplet 1/2 and singlet -3/2 of the Casimir tensor, divided by x1 - x2 = -1
    assert np.allclose(_spectrum(K1), [-0.5, -0.5, -0.5, 1.5])
    assert exact.is_zero(K1 + K2)


@given(st.lists(st.fractions(-5, 5, max_denominator=5), min_size=3, max_size=3, unique=True),
       st.lists(st.integers(1, 2), min_size=3, max_size=3))
@settings(max_examples=15, deadline=None)
def test_gaudin_hamiltonians_commute_and_are_symmetric(x, labels):
    m = TensorModule("sl2", labels)
    ops = gaudin_hamiltonians(m, x)
    assert check_gaudin(m, ops)["n"] == 3


def test_gaudin_rejects_repeated_points():
    with pytest.raises(ValueError):
        gaudin_hamiltonians(TensorModule("sl2", [1, 1]), [0, 0])


def test_compositions():
    assert sorted(compositions(2, 2)) == [(0, 2), (1, 1), (2, 0)]


def test_discriminantal_two_spins():
    data = GaudinData.sl2([1, 1], 1, [0, 1])
    arr = build_discriminantal(data)
    assert arr.family.n == 2 and arr.family.k == 1
    assert arr.family.weights == (-1, -1)
    assert list(arr.z0) == [0, 1]
    check_master_function(arr)
    (cp,) = solve_discriminantal(arr)
    assert cp.t_exact == (Q(1, 2),)
    assert all(g == 0 for g in gaudin_master_gradient(data, cp.t_exact))


def test_discriminantal_rejects_single_point_single_root():
    with pytest.raises(ValueError):
        build_discriminantal(GaudinData.sl2([1], 1, [0]))


def test_bethe_vector_two_spins():
    data = GaudinData.sl2([1, 1], 1, [0, 1])
    m = module_for(data)
    w = weight_function(m, data, [Q(1, 2)])
    assert list(w) == [-2, 2]
    bv = weight_function_and_bethe(m, data, [Q(1, 2)], critical=True)
    assert bv.eigenvalues == {0: Q(3, 2), 1: Q(-3, 2)}
    assert bv.norm == bv.hessian == 8


def test_bethe_vector_rejects_wrong_eigenvalue_claim():
    data = GaudinData.sl2([1, 1], 1, [0, 1])
    with pytest.raises(VerificationError):
        weight_function_and_bethe(module_for(data), data, [Q(1, 3)], critical=True)


def test_gaudin_eigenvalue_formula():
    data = GaudinData.sl2([1, 1], 1, [0, 1])
    assert data.shift(0) == Q(-1, 2)
    assert gaudin_eigenvalue(data, 0, [Q(1, 2)]) == Q(3, 2)


def test_sk_action_and_antisymmetrizer_for_two_roots():
    data = GaudinData.sl2([-1, -1], 2, [0, 1])
    arr = build_discriminantal(data)
    group = sk_elements(data.kvec)
    assert len(group) == group_order(data.kvec) == 2
    for sigma in group:
        sk_action(arr, sigma)
    ant = antisymmetrizer(arr)
    assert exact.is_zero(ant @ ant - 2 * ant)


def test_three_spin_spectra():
    data = GaudinData.sl2([1, 1, 1], 1, [0, 1, 3])
    rep = geometric_vs_gaudin_spectra(data)
    assert rep["good_fiber"] and rep["geometric_dim"] == rep["gaudin_dim"] == 2
    for b in rep["b"]:
        shifted = [g - float(Q(b["c_b"])) for g in b["gaudin"]]
        assert np.allclose(sorted(shifted), b["geometric"])


def test_verma_pair_spectra_through_antisymmetrizer():
    data = GaudinData.sl2([-1, -1], 2, [0, 1])
    rep = geometric_vs_gaudin_spectra(data)
    assert not rep["good_fiber"]
    assert rep["antisymmetrizer_order"] == 2


@given(st.lists(st.integers(-6, 6), min_size=3, max_size=3, unique=True))
@settings(max_examples=5, deadline=None)
def test_three_spin_spectra_any_points(x):
    geometric_vs_gaudin_spectra(GaudinData.sl2([1, 1, 1], 1, x))


def test_dphi_coefficients_two_points():
    data = GaudinData.gl2([1, 1], 1, [0, 1])
    u, (g1, g2) = dphi_coefficients(data, [Q(1, 2)])
    assert sp.simplify(g1 - (1 - 2 * u) / (u * (u - 1))) == 0
    assert sp.simplify(g2 - 2 / (u * (u - 1))) == 0


def test_gl2_row_determinant():
    data = GaudinData.gl2([1, 1], 1, [0, 1])
    rep = dphi_and_gl2_bethe(data, [Q(1, 2)])
    assert len(rep["samples"]) == 5 and rep["commutator_zero"]
    with pytest.raises(ValueError):
        gl2_operators(module_for(data), data.x, 0)
    with pytest.raises(ValueError):
        dphi_and_gl2_bethe(data, [Q(1, 3)])


def test_gl2_data_validation():
    with pytest.raises(ValueError):
        GaudinData.gl2([[1, 1], [1, 0]], 1, [0, 1])
    with pytest.raises(ValueError):
        GaudinData.sl2([1, 1], 1, [0, 0])
