"""Structure-constant algebras: axioms, GNS norms, Wedderburn data.

Oracles: M_n has one block of size n and canonical trace tr(e_00) = 1/n;
the function algebra on a group of order n is commutative with n blocks
of size 1.
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hopfcheck.algebra import (
    canonical_trace,
    center_basis,
    leg_mul,
    leg_norm,
    leg_star,
    leg_unit,
    matrix_algebra,
    mvn_equivalent,
    tensor_algebra,
    validate_algebra,
    verify_matrix_units,
    wedderburn,
)
from hopfcheck.errors import NotProjection
from hopfcheck.hopf import build_function_algebra, cyclic_table


def test_matrix_algebra_axioms():
    report = validate_algebra(matrix_algebra(3))
    assert report.passed
    assert len(report.entries) == 6


@settings(max_examples=8, deadline=None)
@given(st.integers(min_value=1, max_value=4))
def test_matrix_algebra_axioms_any_size(n):
    assert validate_algebra(matrix_algebra(n)).passed


def test_matrix_units_multiply():
    m2 = matrix_algebra(2)
    e01 = m2.basis_element(1)
    e10 = m2.basis_element(2)
    prod = e01 * e10
    np.testing.assert_allclose(prod.coeffs, m2.basis_element(0).coeffs, atol=1e-14)
    assert (e01 * e01).norm() < 1e-14


def test_gns_norm_values():
    m2 = matrix_algebra(2)
    assert m2.one().norm() == pytest.approx(1.0)
    assert m2.basis_element(1).norm() == pytest.approx(1.0)
    # hermitian element: norm is the spectral radius
    x = m2.basis_element(0) - m2.basis_element(3)
    assert x.norm() == pytest.approx(1.0)


def test_star_is_isometric_involution():
    m2 = matrix_algebra(2)
    rng = np.random.default_rng(2)
    x = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    assert np.abs(m2.star(m2.star(x)) - x).max() < 1e-14
    assert m2.norm(m2.star(x)) == pytest.approx(m2.norm(x))


def test_tensor_algebra_matches_leg_calculus():
    a = matrix_algebra(2)
    b = build_function_algebra(cyclic_table(3)).alg
    ab = tensor_algebra(a, b)
    assert validate_algebra(ab).passed

    rng = np.random.default_rng(4)
    legs = [a, b]
    x = rng.standard_normal((4, 3)) + 1j * rng.standard_normal((4, 3))
    y = rng.standard_normal((4, 3)) + 1j * rng.standard_normal((4, 3))
    flat = ab.mul(x.reshape(-1), y.reshape(-1))
    assert np.abs(leg_mul(legs, x, y).reshape(-1) - flat).max() < 1e-12
    assert np.abs(leg_star(legs, x).reshape(-1) - ab.star(x.reshape(-1))).max() < 1e-12
    assert np.abs(leg_unit(legs).reshape(-1) - ab.unit).max() == 0.0
    assert leg_norm(legs, x) == pytest.approx(ab.norm(x.reshape(-1)))


def test_wedderburn_full_matrix_block():
    wd = wedderburn(matrix_algebra(3))
    assert wd.blocks == [3]
    assert verify_matrix_units(wd).passed


def test_wedderburn_commutative():
    alg = build_function_algebra(cyclic_table(3)).alg
    wd = wedderburn(alg)
    assert wd.blocks == [1, 1, 1]
    assert verify_matrix_units(wd).passed
    assert len(center_basis(alg)) == 3


def test_center_of_matrix_algebra_is_scalars():
    assert len(center_basis(matrix_algebra(2))) == 1


def test_canonical_trace_values():
    m2 = matrix_algebra(2)
    wd = wedderburn(m2)
    tr = canonical_trace(wd)
    assert tr(m2.one()) == pytest.approx(1.0)
    assert tr(m2.basis_element(0)) == pytest.approx(0.5)
    assert tr(m2.basis_element(1)) == pytest.approx(0.0)
    # tracial: tr(xy) = tr(yx) on a random pair
    rng = np.random.default_rng(6)
    x = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    y = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    assert tr(m2.mul(x, y)) == pytest.approx(tr(m2.mul(y, x)))


def test_mvn_comparison():
    m2 = matrix_algebra(2)
    wd = wedderburn(m2)
    e00 = m2.basis_element(0).coeffs
    e11 = m2.basis_element(3).coeffs
    assert mvn_equivalent(e00, e11, wd)
    assert not mvn_equivalent(e00, m2.unit, wd)
    with pytest.raises(NotProjection):
        mvn_equivalent(e00, m2.basis_element(1).coeffs, wd)
