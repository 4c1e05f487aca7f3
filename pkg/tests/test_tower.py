"""Tower levels: closed form, inclusions, Rohlin data, intertwiners."""

import numpy as np
import pytest

from hopfcheck.algebra import matrix_algebra, tensor_algebra, wedderburn
from hopfcheck.errors import LevelTooLarge, RankObstruction
from hopfcheck.hopf import build_function_algebra, cyclic_table
from hopfcheck.tower import (
    build_base,
    build_level,
    build_tower,
    intertwine_homomorphism,
    rohlin_report,
)


def test_tower_dimensions(tower_f2):
    assert [lv.algebra.dim for lv in tower_f2] == [4, 16, 64]
    assert [lv.n for lv in tower_f2] == [1, 2, 3]
    for lv in tower_f2:
        assert lv.report.passed


def test_closed_form_entry(tower_f2):
    for lv in tower_f2[1:]:
        assert lv.report["tower.closed-form"].residual < 1e-12


def test_inclusion_is_unital_homomorphism(tower_f2):
    lv = tower_f2[1]
    prev = tower_f2[0]
    inc = lv.inclusion
    assert inc.shape == (16, 4)
    assert np.abs(inc @ prev.algebra.unit - lv.algebra.unit).max() < 1e-12
    rng = np.random.default_rng(3)
    a = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    b = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    lhs = lv.algebra.mul(inc @ a, inc @ b)
    assert lv.algebra.norm(lhs - inc @ prev.algebra.mul(a, b)) < 1e-12


def test_rohlin_report_levels(tower_f2):
    for lv in tower_f2[:2]:
        rw, wit, report = rohlin_report(lv)
        assert report.passed
        # projection residuals are exact for this tower
        assert rw.residuals["rohlin.haar-average"] < 1e-12
        assert rw.residuals["rohlin.commutant"] < 1e-12
        assert wit.residuals[0] < 1e-12


def test_projection_is_not_central(tower_f2):
    # p_n commutes with the embedded A_{n-1}, not with all of A_n; the
    # report quantifies over the former and this pins the distinction.
    lv = tower_f2[0]
    alg = lv.algebra
    worst = max(
        alg.norm(alg.mul(lv.p, e) - alg.mul(e, lv.p)) for e in np.eye(alg.dim)
    )
    assert worst > 0.5


def test_level_cap(tower_f2):
    with pytest.raises(LevelTooLarge):
        build_level(tower_f2[2].base, prev=tower_f2[2])


def test_tower_of_z3():
    q = build_function_algebra(cyclic_table(3))
    levels = build_tower(q, 2)
    assert [lv.algebra.dim for lv in levels] == [9, 81]
    for lv in levels:
        assert lv.report.passed
    rw, wit, report = rohlin_report(levels[1])
    assert report.passed


def test_intertwine_embedding_second_leg():
    m2 = matrix_algebra(2)
    amb = tensor_algebra(m2, matrix_algebra(2))
    # the homomorphism x ↦ 1⊗x lands in the same multiplicity as x ↦ x⊗1
    rho = np.stack(
        [np.einsum("i,w->iw", m2.unit, col).reshape(-1) for col in np.eye(4)], axis=1
    )
    units = {(i, j): m2.basis_element(2 * i + j).coeffs for i in range(2) for j in range(2)}
    u, report = intertwine_homomorphism(rho, m2, 2, units)
    assert report.passed
    assert amb.norm(amb.mul(u, amb.star(u)) - amb.unit) < 1e-9


def test_intertwine_rank_obstruction():
    # the swap automorphism of C⊕C moves the projection (1,0); no inner
    # unitary of a commutative algebra can do that
    cc = build_function_algebra(cyclic_table(2)).alg
    swap = np.array([[0.0, 1.0], [1.0, 0.0]])
    units = {(0, 0): np.array([1.0, 0.0])}
    with pytest.raises(RankObstruction):
        intertwine_homomorphism(swap, cc, 1, units)


def test_base_matches_first_level(tower_f2, f2):
    lv1 = tower_f2[0]
    assert lv1.base.alg is lv1.algebra
    assert wedderburn(lv1.algebra).blocks == [2]
    assert lv1.inclusion.shape == (4, 1)
    fresh = build_base(f2)
    assert np.abs(fresh.alg.mult - lv1.algebra.mult).max() == 0.0
