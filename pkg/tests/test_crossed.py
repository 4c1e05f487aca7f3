"""Crossed products: covariance relations, quasi-basis, V, iteration.

The recurring oracle is that H⁰⋊H built from the comultiplication
coaction is the full matrix algebra M_N.
"""

import numpy as np
import pytest

from hopfcheck.algebra import wedderburn
from hopfcheck.coaction import check_saturated, trivial_coaction, untwisted, validate_coaction
from hopfcheck.crossed import (
    FLAT_DIM_CAP,
    build_crossed,
    crossed_report,
    dual_coaction,
    iso_exterior,
    iterate_crossed,
    quasi_basis,
    quasi_basis_report,
    v_report,
)
from hopfcheck.errors import StructureFailure
from hopfcheck.hopf import build_group_algebra, symmetric_table
from hopfcheck.tower import build_base


def test_base_is_full_matrix_block(f2, g3):
    for q, n in ((f2, 2), (g3, 3)):
        cp = build_base(q)
        assert cp.alg.dim == n * n
        assert wedderburn(cp.alg).blocks == [n]


def test_crossed_report(f2):
    cp = build_base(f2)
    report = crossed_report(cp)
    assert report.passed
    names = [e.name for e in report.entries]
    assert "crossed.covariance" in names
    assert "crossed.dual-cocycle-relation" in names
    assert "crossed.untwisted-dual-star" in names


def test_embeddings_multiply(g3):
    cp = build_base(g3)
    rng = np.random.default_rng(10)
    a = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    b = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    lhs = cp.mul(cp.embed_base(a), cp.embed_base(b))
    rhs = cp.embed_base(cp.base.mul(a, b))
    assert cp.alg.norm(lhs - rhs) < 1e-12
    # a⋊φ = (a⋊1)(1⋊φ)
    phi = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    assert (
        cp.alg.norm(cp.mul(cp.embed_base(a), cp.embed_dual(phi)) - cp.pair_element(a, phi))
        < 1e-12
    )


def test_expectation_onto_base(g3):
    cp = build_base(g3)
    rng = np.random.default_rng(12)
    a = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    np.testing.assert_allclose(cp.e1(cp.embed_base(a)), a, atol=1e-12)
    # E₁ is idempotent through the embedding
    x = rng.standard_normal(9) + 1j * rng.standard_normal(9)
    once = cp.e1(x)
    np.testing.assert_allclose(cp.e1(cp.embed_base(once)), once, atol=1e-12)


def test_quasi_basis(f2, g3):
    for q in (f2, g3):
        cp = build_base(q)
        qb = quasi_basis(cp)
        assert len(qb.labels) == sum(d * d for d in qb.block_dims)
        assert quasi_basis_report(qb).passed


def test_v_unitary_report(f2):
    report = v_report(build_base(f2))
    assert [e.name for e in report.entries] == [
        "v.unitary",
        "v.u-recovery",
        "v.uhat-recovery",
        "v.implements-coaction",
    ]
    assert report.passed


def test_dual_coaction_validates(f2):
    cp = build_base(f2)
    assert validate_coaction(dual_coaction(cp)).passed
    assert check_saturated(cp.twisted.weak, cp)


def test_iterate_crossed(f2):
    cp = build_base(f2)
    cp2 = iterate_crossed(cp)
    assert cp2.alg.dim == 8
    assert crossed_report(cp2).passed


def test_dimension_cap():
    q = build_group_algebra(symmetric_table(3))
    cp = build_base(q)  # 36-dimensional, still under the cap
    assert cp.alg.dim == 36
    assert cp.alg.dim * cp.acting.N > FLAT_DIM_CAP
    with pytest.raises(StructureFailure):
        iterate_crossed(cp)


def test_unsaturated_trivial_coaction(f2):
    from hopfcheck.algebra import StructureAlgebra

    scalars = StructureAlgebra(
        mult=np.ones((1, 1, 1)), unit=np.ones(1), star_matrix=np.eye(1), label="C"
    )
    c = trivial_coaction(scalars, f2)
    cp = build_crossed(untwisted(c))
    assert not check_saturated(c, cp)


def test_iso_exterior_for_coboundary(f2):
    from hopfcheck.cocycle import seeded_unitary

    cp1 = build_base(f2)
    c = cp1.twisted.weak
    a = c.A
    x = seeded_unitary(a, np.eye(a.dim), seed=5)
    xs = a.star(x)
    v = np.stack([a.mul(x, c.rho_of(xs)[:, m]) for m in range(c.H.N)], axis=1)
    from hopfcheck.coaction import exterior_transform

    cp2 = build_crossed(exterior_transform(cp1.twisted, v))
    iso = iso_exterior(cp1, cp2, v)
    assert iso.report.passed
    # the map really is an algebra iso: check one random product
    rng = np.random.default_rng(14)
    p = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    q = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    lhs = iso.phi(cp1.mul(p, q))
    rhs = cp2.mul(iso.phi(p), iso.phi(q))
    assert cp2.alg.norm(lhs - rhs) < 1e-10
