"""Dense complex linear algebra primitives.

Matrices are numpy arrays of complex128. The global tensor index
convention is "left factor major": the flat index of a ⊗ b runs the
left factor slowest, which is exactly numpy's C-order reshape, so
kron/reshape round-trips hold with no extra bookkeeping.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import Inconsistent, SingularInput

Mat = np.ndarray


@dataclass(frozen=True)
class Tolerance:
    absolute: float = 1e-9
    relative: float = 1e-9


DEFAULT_TOL = Tolerance()


def as_complex(a) -> Mat:
    return np.asarray(a, dtype=np.complex128)


def dagger(a: Mat) -> Mat:
    return np.conjugate(np.transpose(as_complex(a)))


def kron(a: Mat, b: Mat) -> Mat:
    """(a⊗b)[(i,k),(j,l)] = a[i,j]·b[k,l], left factor major."""
    return np.kron(as_complex(a), as_complex(b))


def singular_values(a: Mat) -> np.ndarray:
    """Singular values in descending order, via eigh of a*a.

    Deterministic (LAPACK tridiagonal path); avoids np.linalg.svd only to
    keep a single well-understood decomposition underneath all norms.
    """
    a = np.atleast_2d(as_complex(a))
    gram = dagger(a) @ a
    evals = np.linalg.eigvalsh(gram)
    return np.sqrt(np.clip(evals[::-1], 0.0, None))


def op_norm(a: Mat) -> float:
    """Largest singular value of a."""
    a = np.atleast_2d(as_complex(a))
    if a.size == 0:
        return 0.0
    return float(singular_values(a)[0])


def herm_sqrt(a: Mat) -> Mat:
    """Positive square root of a (assumed Hermitian PSD up to round-off)."""
    evals, vecs = np.linalg.eigh(as_complex(a))
    return (vecs * np.sqrt(np.clip(evals, 0.0, None))) @ dagger(vecs)


def polar(y: Mat, tol: Tolerance = DEFAULT_TOL) -> tuple[Mat, Mat]:
    """Polar decomposition y = u·p with u unitary, p = (y*y)^{1/2}.

    Requires y invertible; raises SingularInput otherwise.
    """
    y = as_complex(y)
    svals = singular_values(y)
    scale = svals[0] if svals.size else 0.0
    if svals.size == 0 or svals[-1] <= tol.absolute * (1.0 + scale):
        raise SingularInput("polar: smallest singular value within tolerance of zero")
    evals, vecs = np.linalg.eigh(dagger(y) @ y)
    p = (vecs * np.sqrt(evals)) @ dagger(vecs)
    p_inv = (vecs / np.sqrt(evals)) @ dagger(vecs)
    return y @ p_inv, p


def rank_eps(a: Mat, tol: Tolerance = DEFAULT_TOL) -> int:
    """Number of singular values above tol.absolute·(1 + op_norm(a))."""
    a = np.atleast_2d(as_complex(a))
    if a.size == 0:
        return 0
    svals = singular_values(a)
    cut = tol.absolute * (1.0 + svals[0])
    return int(np.count_nonzero(svals > cut))


def solve_linear(a: Mat, b: Mat, tol: Tolerance = DEFAULT_TOL) -> Mat:
    """Least-squares solution of a·x = b; raises Inconsistent on bad fit."""
    a = np.atleast_2d(as_complex(a))
    b = as_complex(b)
    x, *_ = np.linalg.lstsq(a, b, rcond=None)
    residual = op_norm(np.atleast_2d(a @ x - b))
    bound = max(tol.absolute, tol.relative * (1.0 + op_norm(np.atleast_2d(b))))
    if residual > bound:
        raise Inconsistent(f"solve_linear: residual {residual:.3e} exceeds {bound:.3e}")
    return x
