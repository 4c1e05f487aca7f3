"""Dense linear algebra helpers: polar parts, norms, ranks, least squares."""

import numpy as np
import pytest

from hopfcheck.errors import Inconsistent, SingularInput
from hopfcheck.linalg import (
    Tolerance,
    dagger,
    herm_sqrt,
    kron,
    op_norm,
    polar,
    rank_eps,
    singular_values,
    solve_linear,
)


def crandn(shape, rng):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def test_op_norm_diagonal():
    assert op_norm(np.diag([3.0, -1.0, 0.5])) == pytest.approx(3.0)


def test_op_norm_matches_singular_values():
    rng = np.random.default_rng(7)
    a = crandn((5, 5), rng)
    assert op_norm(a) == pytest.approx(np.max(singular_values(a)))


def test_op_norm_submultiplicative():
    rng = np.random.default_rng(11)
    a = crandn((4, 4), rng)
    b = crandn((4, 4), rng)
    assert op_norm(a @ b) <= op_norm(a) * op_norm(b) + 1e-12


def test_herm_sqrt_squares_back():
    rng = np.random.default_rng(3)
    a = crandn((6, 6), rng)
    h = a @ dagger(a)
    r = herm_sqrt(h)
    assert op_norm(r @ r - h) < 1e-10
    assert op_norm(r - dagger(r)) < 1e-12


def test_polar_factors():
    rng = np.random.default_rng(5)
    y = crandn((5, 5), rng) + 3.0 * np.eye(5)
    u, p = polar(y)
    assert op_norm(u @ dagger(u) - np.eye(5)) < 1e-12
    assert op_norm(u @ p - y) < 1e-10
    # positive factor is the hermitian square root of y*y
    assert op_norm(p - herm_sqrt(dagger(y) @ y)) < 1e-10


def test_polar_rejects_singular():
    y = np.diag([1.0, 0.0])
    with pytest.raises(SingularInput):
        polar(y)


def test_kron_shapes_and_values():
    a = np.array([[0.0, 1.0], [1.0, 0.0]])
    b = np.eye(3)
    k = kron(a, b)
    assert k.shape == (6, 6)
    assert op_norm(k - np.kron(a, b)) == 0.0


def test_rank_eps():
    rng = np.random.default_rng(9)
    cols = crandn((6, 2), rng)
    a = cols @ dagger(cols)
    assert rank_eps(a) == 2
    assert rank_eps(np.zeros((4, 4))) == 0


def test_solve_linear_consistent():
    rng = np.random.default_rng(13)
    a = crandn((6, 3), rng)
    x = crandn((3,), rng)
    got = solve_linear(a, a @ x)
    assert np.linalg.norm(got - x) < 1e-10


def test_solve_linear_inconsistent():
    a = np.array([[1.0], [0.0]])
    b = np.array([0.0, 1.0])
    with pytest.raises(Inconsistent):
        solve_linear(a, b)


def test_tolerance_defaults():
    t = Tolerance()
    assert t.absolute == 1e-9 and t.relative == 1e-9
