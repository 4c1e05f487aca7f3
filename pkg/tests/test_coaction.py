"""Coactions, twists, exterior transforms, and the group-action bridge."""

import numpy as np
import pytest

from hopfcheck.algebra import leg_unit, matrix_algebra
from hopfcheck.coaction import (
    CoactionMap,
    act_vec,
    amplify,
    coaction_from_group_action,
    conjugate_coaction,
    exterior_transform,
    fixed_point,
    leg_swap_matrix,
    trivial_coaction,
    untwisted,
    validate_coaction,
    validate_twisted,
)
from hopfcheck.errors import NotAnAction, NotCounital
from hopfcheck.hopf import cyclic_table


def comult_coaction(h):
    """The comultiplication of h, viewed as a coaction of h on its own algebra."""
    return CoactionMap(h.alg, h, h.comult.reshape(h.N * h.N, h.N))


FLIP = [np.eye(2), np.array([[0.0, 1.0], [1.0, 0.0]])]


def translation_coaction(f2):
    return coaction_from_group_action(f2.alg, cyclic_table(2), FLIP)


def test_trivial_coaction_validates(f2):
    c = trivial_coaction(matrix_algebra(2), f2)
    assert validate_coaction(c).passed
    basis, emat = fixed_point(c)
    assert basis.shape[1] == 4  # everything is fixed
    assert np.abs(emat - np.eye(4)).max() < 1e-12


def test_comult_coaction_validates(f2, g3):
    for h in (f2, g3):
        report = validate_coaction(comult_coaction(h))
        assert [e.name for e in report.entries] == [
            "coaction.star-homomorphism",
            "coaction.counit",
            "coaction.full",
        ]
        assert report.passed


def test_comult_fixed_points_are_scalars(g3):
    c = comult_coaction(g3)
    basis, emat = fixed_point(c)
    assert basis.shape[1] == 1
    # the averaging map projects onto the scalars: E(a) = τ(a)·1
    from hopfcheck.hopf import haar_pair

    tau = haar_pair(g3).tau
    assert np.abs(emat - np.outer(g3.alg.unit, tau)).max() < 1e-12


def test_translation_coaction(f2):
    c = translation_coaction(f2)
    assert validate_coaction(c).passed
    # acting by the group-element functional applies the automorphism
    delta0 = np.array([1.0, 0.0])
    moved = act_vec(np.array([0.0, 1.0]), delta0, c)
    np.testing.assert_allclose(moved, FLIP[1] @ delta0, atol=1e-12)


def test_group_action_rejections(f2):
    with pytest.raises(NotAnAction):
        coaction_from_group_action(f2.alg, cyclic_table(2), [np.eye(2), np.eye(2) * 2.0])
    with pytest.raises(NotAnAction):
        # only one matrix for a two-element group
        coaction_from_group_action(f2.alg, cyclic_table(2), [np.eye(2)])


def test_untwisted_data_validates(f2):
    t = untwisted(comult_coaction(f2))
    report = validate_twisted(t)
    assert [e.name for e in report.entries] == [
        "twisted.coaction-relation",
        "twisted.cocycle-identity",
        "twisted.counit-normalization",
        "twisted.u-unitary",
    ]
    assert report.passed


def test_exterior_transform_of_coboundary_is_cocycle(f2):
    from hopfcheck.cocycle import seeded_unitary

    c = comult_coaction(f2)
    t = untwisted(c)
    a = c.A
    x = seeded_unitary(a, np.eye(a.dim), seed=3)
    xs = a.star(x)
    # v = (x⊗1)ρ(x*) is a coboundary, so the transformed twist is trivial
    v = np.stack([a.mul(x, c.rho_of(xs)[:, m]) for m in range(c.H.N)], axis=1)
    t1 = exterior_transform(t, v)
    assert validate_twisted(t1).passed
    assert np.abs(t1.u - leg_unit(t.legs3)).max() < 1e-12


def test_exterior_transform_needs_counital(f2):
    c = comult_coaction(f2)
    t = untwisted(c)
    chi = np.array([1.0, -1.0])  # unitary but (id⊗ε)(χ⊗1) = χ ≠ 1
    v = np.outer(chi, c.H.alg.unit)
    with pytest.raises(NotCounital):
        exterior_transform(t, v)


def test_conjugate_coaction(f2):
    c = translation_coaction(f2)
    y = np.array([1.0, -1.0])  # unitary in C(Z2)
    c2 = conjugate_coaction(c, y)
    assert validate_coaction(c2).passed
    # conjugating by the unit changes nothing
    same = conjugate_coaction(c, c.A.unit)
    assert np.abs(same.rho - c.rho).max() < 1e-12


def test_amplify(f2):
    t = untwisted(comult_coaction(f2))
    t2 = amplify(t, 2)
    assert t2.weak.A.dim == 2 * 4
    assert validate_twisted(t2).passed
    assert amplify(t, 1) is t


def test_leg_swap_matrix():
    rng = np.random.default_rng(8)
    x = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    y = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    swap = leg_swap_matrix((2, 3), (1, 0))
    np.testing.assert_allclose(swap @ np.kron(x, y), np.kron(y, x), atol=1e-14)
