"""Finite-dimensional *-algebras given by structure constants.

An algebra is a basis b_0..b_{d-1} with a multiplication tensor
mult[i,j,:] = coefficients of b_i·b_j, a unit coefficient vector, and an
involution stored as conjugate-then-matrix: star(x) = star_matrix @ conj(x).
Elements are plain coefficient vectors; tensor-product elements are
multi-axis arrays with one axis per factor (left factor major throughout).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce

import numpy as np

from .errors import NotProjection, NotSemisimple
from .linalg import DEFAULT_TOL, Tolerance, as_complex, dagger, kron, op_norm, rank_eps
from .report import ResidualReport


class StructureAlgebra:
    def __init__(self, mult, unit, star_matrix, label: str = ""):
        self.mult = as_complex(mult)
        self.unit = as_complex(unit)
        self.star_matrix = as_complex(star_matrix)
        self.label = label
        self.dim = int(self.unit.shape[0])
        if self.mult.shape != (self.dim, self.dim, self.dim):
            raise ValueError("mult tensor shape does not match unit length")
        self._gns = None

    def __repr__(self):
        return f"StructureAlgebra({self.label or 'unnamed'}, dim={self.dim})"

    def element(self, coeffs) -> "AlgebraElement":
        return AlgebraElement(self, as_complex(coeffs))

    def basis_element(self, i: int) -> "AlgebraElement":
        coeffs = np.zeros(self.dim, dtype=np.complex128)
        coeffs[i] = 1.0
        return AlgebraElement(self, coeffs)

    @property
    def one(self) -> "AlgebraElement":
        return self.element(self.unit)

    # raw-vector arithmetic used by everything downstream

    def mul(self, x, y):
        return np.einsum("ijk,i,j->k", self.mult, as_complex(x), as_complex(y))

    def star(self, x):
        return self.star_matrix @ np.conjugate(as_complex(x))

    def lmul_matrix(self, x):
        """Matrix of left multiplication by x on coefficient vectors."""
        return np.einsum("ijk,i->kj", self.mult, as_complex(x))

    def rmul_matrix(self, x):
        return np.einsum("ijk,j->ki", self.mult, as_complex(x))

    def gns(self):
        """Faithful *-representation from the regular trace.

        Returns (rep, rep_of) where rep[i] is the image of b_i and
        rep_of(x) evaluates coefficient vectors. Raises NotSemisimple if
        the trace form is degenerate (no C*-structure to represent).
        """
        if self._gns is None:
            lmats = self.mult.transpose(0, 2, 1)  # lmats[i][k,j] = mult[i,j,k]
            trow = np.einsum("ikk->i", lmats)
            gram = np.einsum("ai,ajk,k->ij", self.star_matrix, self.mult, trow)
            gram = 0.5 * (gram + dagger(gram))
            evals, vecs = np.linalg.eigh(gram)
            if evals[0] <= 1e-10 * max(evals[-1], 1.0):
                raise NotSemisimple(
                    f"{self.label or 'algebra'}: trace form not positive definite"
                )
            c = (vecs * np.sqrt(evals)) @ dagger(vecs)
            c_inv = (vecs / np.sqrt(evals)) @ dagger(vecs)
            rep = np.einsum("ab,ibc,cd->iad", c, lmats, c_inv)
            self._gns = rep
        return self._gns

    def rep_of(self, x):
        return np.tensordot(as_complex(x), self.gns(), axes=(0, 0))

    def norm(self, x) -> float:
        """C*-operator norm of x in the regular representation."""
        return op_norm(self.rep_of(x))


@dataclass
class AlgebraElement:
    parent: StructureAlgebra
    coeffs: np.ndarray

    def __post_init__(self):
        self.coeffs = as_complex(self.coeffs)
        if self.coeffs.shape != (self.parent.dim,):
            raise ValueError("coefficient length does not match algebra dimension")

    def __add__(self, other):
        return AlgebraElement(self.parent, self.coeffs + other.coeffs)

    def __sub__(self, other):
        return AlgebraElement(self.parent, self.coeffs - other.coeffs)

    def __mul__(self, other):
        if np.isscalar(other):
            return AlgebraElement(self.parent, self.coeffs * other)
        return AlgebraElement(self.parent, self.parent.mul(self.coeffs, other.coeffs))

    def __rmul__(self, scalar):
        return AlgebraElement(self.parent, self.coeffs * scalar)

    def star(self):
        return AlgebraElement(self.parent, self.parent.star(self.coeffs))

    def norm(self) -> float:
        return self.parent.norm(self.coeffs)


def validate_algebra(alg: StructureAlgebra, tol: Tolerance = DEFAULT_TOL) -> ResidualReport:
    """Associativity, unit and involution axioms by exhaustive contraction.

    Residuals are max-abs coefficient deviations over all basis tuples.
    """
    report = ResidualReport()
    m, d = alg.mult, alg.dim
    left = np.einsum("ijm,mkl->ijkl", m, m)
    right = np.einsum("jkm,iml->ijkl", m, m)
    report.add("algebra.associativity", np.abs(left - right).max(), tol.absolute)

    lunit = np.einsum("ijk,i->jk", m, alg.unit)
    runit = np.einsum("ijk,j->ik", m, alg.unit)
    eye = np.eye(d)
    report.add("algebra.unit-left", np.abs(lunit - eye).max(), tol.absolute)
    report.add("algebra.unit-right", np.abs(runit - eye).max(), tol.absolute)

    t = alg.star_matrix
    report.add("algebra.star-involutive", np.abs(t @ np.conjugate(t) - eye).max(), tol.absolute)
    report.add("algebra.star-unit", np.abs(alg.star(alg.unit) - alg.unit).max(), tol.absolute)
    # (b_i b_j)* vs b_j* b_i*, all pairs at once
    lhs = np.einsum("kl,ijk->ijl", t, np.conjugate(m))
    rhs = np.einsum("aj,bi,abl->ijl", t, t, m)
    report.add("algebra.star-antimultiplicative", np.abs(lhs - rhs).max(), tol.absolute)
    return report


# ---------------------------------------------------------------------------
# tensor products and multi-leg elements


def tensor_algebra(a: StructureAlgebra, b: StructureAlgebra, label: str = "") -> StructureAlgebra:
    mult = np.einsum("ijk,pqr->ipjqkr", a.mult, b.mult).reshape(
        a.dim * b.dim, a.dim * b.dim, a.dim * b.dim
    )
    unit = np.kron(a.unit, b.unit)
    star = kron(a.star_matrix, b.star_matrix)
    return StructureAlgebra(mult, unit, star, label or f"{a.label}(x){b.label}")


def leg_mul(algs, x, y):
    """Product in ⊗ algs of multi-axis coefficient arrays x, y."""
    x, y = as_complex(x), as_complex(y)
    n = len(algs)
    # z[k...] = sum x[i...] y[j...] prod mult_l[i_l, j_l, k_l]
    letters = "abcdefghijklmnopqrstuvwxyz"
    xi = letters[:n]
    yj = letters[n : 2 * n]
    zk = letters[2 * n : 3 * n]
    terms = [xi, yj] + [xi[l] + yj[l] + zk[l] for l in range(n)]
    operands = [x, y] + [alg.mult for alg in algs]
    return np.einsum(",".join(terms) + "->" + zk, *operands, optimize=True)


def leg_star(algs, x):
    out = np.conjugate(as_complex(x))
    for axis, alg in enumerate(algs):
        out = np.moveaxis(np.tensordot(alg.star_matrix, out, axes=(1, axis)), 0, axis)
    return out


def leg_unit(algs):
    return reduce(np.multiply.outer, [alg.unit for alg in algs])


def leg_rep(algs, x):
    """Image of a multi-leg element under the tensor of regular representations."""
    t = as_complex(x)
    n = len(algs)
    for axis in range(n):
        # contract the current leading leg with its rep tensor; the (row, col)
        # axes accumulate at the end in leg order
        t = np.tensordot(t, algs[axis].gns(), axes=(0, 0))
    perm = [2 * l for l in range(n)] + [2 * l + 1 for l in range(n)]
    t = t.transpose(perm)
    nr = int(np.prod([algs[l].gns().shape[1] for l in range(n)]))
    return t.reshape(nr, nr)


def leg_norm(algs, x) -> float:
    return op_norm(leg_rep(algs, x))


def matrix_algebra(n: int, label: str = "") -> StructureAlgebra:
    """M_n(C) with the matrix-unit basis e_{ab} at index a·n+b."""
    d = n * n
    mult = np.zeros((d, d, d), dtype=np.complex128)
    for a in range(n):
        for b in range(n):
            for c in range(n):
                mult[a * n + b, b * n + c, a * n + c] = 1.0
    unit = np.zeros(d, dtype=np.complex128)
    for a in range(n):
        unit[a * n + a] = 1.0
    star = np.zeros((d, d))
    for a in range(n):
        for b in range(n):
            star[b * n + a, a * n + b] = 1.0
    return StructureAlgebra(mult, unit, star, label or f"M{n}")


# ---------------------------------------------------------------------------
# Wedderburn decomposition


@dataclass
class WedderburnData:
    alg: StructureAlgebra
    blocks: list
    central_projections: list
    matrix_units: dict = field(repr=False)
    # matrix_units[(k, i, j)] -> coefficient vector, i,j zero-based within block k

    def unit_defect(self) -> float:
        total = sum(
            self.matrix_units[(k, i, i)]
            for k, dk in enumerate(self.blocks)
            for i in range(dk)
        )
        return float(np.abs(total - self.alg.unit).max())


def nullspace(m, rtol=1e-10):
    m = np.atleast_2d(as_complex(m))
    gram = dagger(m) @ m
    evals, vecs = np.linalg.eigh(gram)
    scale = max(float(evals[-1]), 1.0)
    keep = evals <= rtol * scale
    return vecs[:, keep]


def orth_columns(m, rtol=1e-10):
    m = np.atleast_2d(as_complex(m))
    gram = m @ dagger(m)
    evals, vecs = np.linalg.eigh(gram)
    scale = max(float(evals[-1]), 1.0)
    keep = evals > rtol * scale
    return vecs[:, keep]


def _cluster(values, rel_gap=1e-7):
    """Group a sorted 1-d real array into clusters separated by relative gaps."""
    values = np.sort(np.asarray(values, dtype=float))
    width = max(values[-1] - values[0], 1.0)
    groups = [[values[0]]]
    for v in values[1:]:
        if v - groups[-1][-1] > rel_gap * width:
            groups.append([v])
        else:
            groups[-1].append(v)
    return [(float(np.mean(g)), len(g)) for g in groups]


def center_basis(alg: StructureAlgebra):
    d = alg.dim
    comm = (alg.mult - alg.mult.transpose(1, 0, 2)).transpose(1, 2, 0).reshape(d * d, d)
    return nullspace(comm)


def _solve_in_span(alg, span_vectors, target_rep):
    """Least-squares solve for an algebra element in a given span whose GNS
    image equals target_rep."""
    cols = np.stack([alg.rep_of(v).ravel() for v in span_vectors], axis=1)
    coeff, *_ = np.linalg.lstsq(cols, target_rep.ravel(), rcond=None)
    return np.tensordot(coeff, np.stack(span_vectors), axes=(0, 0))


def _polish_projection(alg, p, sweeps=3):
    for _ in range(sweeps):
        p = 0.5 * (p + alg.star(p))
        p2 = alg.mul(p, p)
        p = 3.0 * p2 - 2.0 * alg.mul(p2, p)
    return 0.5 * (p + alg.star(p))


def wedderburn(alg: StructureAlgebra, seed: int = 0) -> WedderburnData:
    """Block decomposition with self-adjoint matrix units.

    Deterministic for a fixed seed: the random draws only pick generic
    elements, all splittings come from eigh.
    """
    rng = np.random.default_rng(seed)
    zbasis = center_basis(alg)
    n_blocks = zbasis.shape[1]

    # minimal central projections from a generic self-adjoint central element
    for _attempt in range(8):
        z = zbasis @ (rng.standard_normal(n_blocks) + 1j * rng.standard_normal(n_blocks))
        z = 0.5 * (z + alg.star(z))
        zrep = alg.rep_of(z)
        zrep = 0.5 * (zrep + dagger(zrep))
        evals = np.linalg.eigvalsh(zrep)
        clusters = _cluster(evals)
        if len(clusters) == n_blocks:
            break
    else:
        raise NotSemisimple("could not split the center into minimal projections")

    evals_full, vecs_full = np.linalg.eigh(zrep)
    width = max(float(evals_full[-1] - evals_full[0]), 1.0)
    centrals = []
    for mean, _count in sorted(clusters, key=lambda c: -c[0]):
        sel = np.abs(evals_full - mean) <= 1e-6 * width
        proj = vecs_full[:, sel] @ dagger(vecs_full[:, sel])
        p = _solve_in_span(alg, list(zbasis.T), proj)
        centrals.append(_polish_projection(alg, p))

    blocks = []
    matrix_units = {}
    for k, p in enumerate(centrals):
        pm = alg.lmul_matrix(p) @ alg.rmul_matrix(p)
        span = orth_columns(pm)
        block_dim2 = span.shape[1]
        dk = int(round(np.sqrt(block_dim2)))
        if dk * dk != block_dim2:
            raise NotSemisimple(f"block {k} span has non-square dimension {block_dim2}")
        blocks.append(dk)
        span_vecs = list(span.T)

        if dk == 1:
            matrix_units[(k, 0, 0)] = p
            continue

        # orthogonal minimal projections: split a generic self-adjoint block element
        for _attempt in range(8):
            draw = rng.standard_normal(block_dim2) + 1j * rng.standard_normal(block_dim2)
            y = alg.mul(alg.mul(p, span @ draw), p)
            y = 0.5 * (y + alg.star(y))
            shift = 3.0 * max(alg.norm(y), 1.0)
            y = y + shift * p
            yrep = alg.rep_of(y)
            yrep = 0.5 * (yrep + dagger(yrep))
            evals, vecs = np.linalg.eigh(yrep)
            nonzero = evals > 0.5 * shift
            clusters = _cluster(evals[nonzero])
            if len(clusters) == dk:
                break
        else:
            raise NotSemisimple(f"could not split block {k} into minimal projections")

        width = max(float(evals[-1] - evals[0]), 1.0)
        minimals = []
        for mean, _count in sorted(clusters, key=lambda c: -c[0]):
            sel = np.abs(evals - mean) <= 1e-6 * width
            proj = vecs[:, sel] @ dagger(vecs[:, sel])
            q = _solve_in_span(alg, span_vecs, proj)
            minimals.append(_polish_projection(alg, q))

        # partial isometries out of the first minimal projection
        q1 = minimals[0]
        isoms = [q1]
        for i in range(1, dk):
            qi = minimals[i]
            for _attempt in range(8):
                r = span @ (rng.standard_normal(block_dim2) + 1j * rng.standard_normal(block_dim2))
                x = alg.mul(alg.mul(q1, r), qi)
                xx = alg.mul(alg.star(x), x)
                t = np.vdot(qi, xx) / np.vdot(qi, qi)
                if abs(t) > 1e-8:
                    break
            else:
                raise NotSemisimple(f"degenerate draw linking projections in block {k}")
            isoms.append(x / np.sqrt(t.real))

        for i in range(dk):
            ei1 = alg.star(isoms[i])
            for j in range(dk):
                matrix_units[(k, i, j)] = alg.mul(ei1, isoms[j])

    return WedderburnData(alg, blocks, centrals, matrix_units)


def verify_matrix_units(wd: WedderburnData, tol: Tolerance = DEFAULT_TOL) -> ResidualReport:
    report = ResidualReport()
    alg = wd.alg
    worst_mult = 0.0
    worst_star = 0.0
    keys = sorted(wd.matrix_units)
    for (k, i, j) in keys:
        eij = wd.matrix_units[(k, i, j)]
        worst_star = max(worst_star, np.abs(alg.star(eij) - wd.matrix_units[(k, j, i)]).max())
        for (r, s, t) in keys:
            prod = alg.mul(eij, wd.matrix_units[(r, s, t)])
            expect = wd.matrix_units[(k, i, t)] if (k == r and j == s) else 0.0
            worst_mult = max(worst_mult, np.abs(prod - expect).max())
    report.add("matrix-units.multiplication", worst_mult, 10 * tol.absolute)
    report.add("matrix-units.star", worst_star, 10 * tol.absolute)
    report.add("matrix-units.sum-to-unit", wd.unit_defect(), 10 * tol.absolute)
    span = np.stack([wd.matrix_units[key] for key in keys])
    report.add(
        "matrix-units.span-dimension",
        abs(rank_eps(span, tol) - alg.dim),
        0.5,
    )
    return report


# ---------------------------------------------------------------------------
# canonical trace and Murray-von Neumann comparison


@dataclass
class CanonicalTrace:
    wd: WedderburnData
    weights: list
    row: np.ndarray

    def __call__(self, x) -> complex:
        if isinstance(x, AlgebraElement):
            x = x.coeffs
        return complex(self.row @ as_complex(x))


def canonical_trace(wd: WedderburnData) -> CanonicalTrace:
    """Tracial state with block weights proportional to d_k."""
    alg = wd.alg
    total = sum(dk * dk for dk in wd.blocks)
    keys = sorted(wd.matrix_units)
    basis = np.stack([wd.matrix_units[key] for key in keys], axis=1)
    values = np.array(
        [wd.blocks[k] / total if i == j else 0.0 for (k, i, j) in keys]
    )
    # row @ basis-column = value on each matrix unit; solve row from the dual system
    row = np.linalg.solve(basis.T, values)
    weights = [dk / total for dk in wd.blocks]
    return CanonicalTrace(wd, weights, row)


def _check_projection(alg, p, tol):
    p = as_complex(p)
    herm = np.abs(alg.star(p) - p).max()
    idem = np.abs(alg.mul(p, p) - p).max()
    if max(herm, idem) > max(tol.absolute, 1e-7):
        raise NotProjection(f"projection residual {max(herm, idem):.3e}")


def mvn_equivalent(p, q, wd: WedderburnData, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Projections are equivalent iff their per-block ranks agree."""
    alg = wd.alg
    pv = p.coeffs if isinstance(p, AlgebraElement) else as_complex(p)
    qv = q.coeffs if isinstance(q, AlgebraElement) else as_complex(q)
    _check_projection(alg, pv, tol)
    _check_projection(alg, qv, tol)
    tr = canonical_trace(wd)
    total = sum(dk * dk for dk in wd.blocks)
    for k, dk in enumerate(wd.blocks):
        zk = wd.central_projections[k]
        ranks = []
        for v in (pv, qv):
            val = tr(alg.mul(zk, v)).real * total / dk
            rank = int(round(val))
            if abs(val - rank) > 1e-6:
                raise NotProjection(f"non-integer block rank {val} in block {k}")
            ranks.append(rank)
        if ranks[0] != ranks[1]:
            return False
    return True
