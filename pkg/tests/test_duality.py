"""The double crossed product, Ψ, and witness transports.

Two dualities appear here. dd_f2 doubles the base crossed product
H⁰⋊H, which exercises Ψ on a 2x2 matrix algebra over C(Z/2). dd_lv1
doubles the crossed product of the level-1 tower coaction, whose base
is the 4-dimensional level algebra; the Rohlin and witness transports
need that one because their data lives at the level, not underneath it.
"""

import numpy as np
import pytest

from hopfcheck.coaction import coaction_from_group_action, untwisted
from hopfcheck.cocycle import seeded_counital_unitary
from hopfcheck.crossed import build_crossed
from hopfcheck.duality import (
    amplify_witness,
    build_duality,
    compress_witness,
    duality_report,
    psi,
    psi_inv,
    rohlin_dual_route,
    transport_witness_dual,
    transport_witness_exterior,
    verify_duality,
)
from hopfcheck.hopf import cyclic_table
from hopfcheck.tower import build_base, rohlin_report


@pytest.fixture(scope="module")
def dd_f2(f2):
    return build_duality(build_base(f2))


@pytest.fixture(scope="module")
def dd_lv1(tower_f2):
    rw, wit, _ = rohlin_report(tower_f2[0])
    dd = build_duality(build_crossed(rw.t))
    return dd, rw, wit


def test_duality_report_entries(dd_f2):
    report = duality_report(dd_f2)
    assert [e.name for e in report.entries] == [
        "duality.vv-orthogonality",
        "duality.projection-sum",
        "duality.u-unitary",
        "duality.ui-range",
        "duality.tau-conjugation",
    ]
    assert report.passed


def test_verify_duality(dd_f2):
    report = verify_duality(dd_f2)
    assert report.passed
    names = [e.name for e in report.entries]
    assert "duality.conjugation-transport" in names
    assert "duality.cocycle-transport" in names


def test_psi_round_trip(dd_f2):
    rng = np.random.default_rng(21)
    L, da = dd_f2.size, dd_f2.cp.base.dim
    m = rng.standard_normal((L, L, da)) + 1j * rng.standard_normal((L, L, da))
    back = psi_inv(dd_f2, psi(dd_f2, m))
    assert np.abs(back - m).max() < 1e-9


def test_duality_for_translation_coaction(f2):
    # the flip action of Z/2 on C(Z/2), crossed and doubled
    flip = [np.eye(2), np.array([[0.0, 1.0], [1.0, 0.0]])]
    c = coaction_from_group_action(f2.alg, cyclic_table(2), flip)
    cp = build_crossed(untwisted(c))
    dd = build_duality(cp)
    assert duality_report(dd).passed
    assert verify_duality(dd).passed


def test_duality_over_level_one(dd_lv1):
    dd, _, _ = dd_lv1
    assert dd.cp2.alg.dim == 16
    assert duality_report(dd).passed
    assert verify_duality(dd).passed


def test_rohlin_dual_route(dd_lv1):
    dd, rw, _ = dd_lv1
    report = rohlin_dual_route(dd, rw)
    assert report.passed
    # the transported projection averages to 1/|Λ| exactly on this tower
    assert report["rohlin.dual-haar-average"].residual < 1e-10


def test_transport_witness_exterior(tower_f2):
    lv = tower_f2[0]
    _, wit, _ = rohlin_report(lv)
    g = seeded_counital_unitary(lv.algebra, lv.hopf, np.eye(lv.algebra.dim), seed=13)
    wit2 = transport_witness_exterior(wit, g)
    assert wit2.report.passed
    assert max(wit2.residuals) < 1e-8


def test_transport_witness_dual(dd_lv1):
    dd, _, wit = dd_lv1
    wit2 = transport_witness_dual(dd, wit)
    assert wit2.report.passed
    assert wit2.w.shape[0] == dd.cp2.alg.dim


def test_amplify_compress_round_trip(tower_f2):
    _, wit, _ = rohlin_report(tower_f2[0])
    amp = amplify_witness(wit, 2)
    assert amp.report.passed
    assert amp.w.shape[0] == wit.w.shape[0] * 4
    back = compress_witness(amp, wit.t, 2)
    assert back.report.passed
    assert np.abs(back.w - wit.w).max() < 1e-12
    assert amplify_witness(wit, 1) is wit
