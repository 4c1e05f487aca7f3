"""Finite-dimensional C*-Hopf algebras over a fixed basis.

Comultiplication is stored as a tensor comult[i,j,k] = coefficient of
b_i⊗b_j in Δ(b_k); the flat (dim²×dim) matrix view keeps the left factor
major. The dual Hopf algebra lives on the coefficient-functional basis, so
every dual structure tensor is a transpose (or conjugate-transpose) of a
primal one, and dual(dual(H)) is literally H's tensors again.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

import numpy as np

from .algebra import (
    AlgebraElement,
    StructureAlgebra,
    WedderburnData,
    nullspace,
    tensor_algebra,
    validate_algebra,
    wedderburn,
)
from .errors import CompatibilityFailure, NoIntegral, NotAGroup, ParentMismatch
from .linalg import DEFAULT_TOL, Tolerance, as_complex, dagger, kron, rank_eps
from .report import ResidualReport


class HopfAlgebra:
    """A *-algebra with comultiplication, counit and antipode.

    comult has shape (N, N, N); counit is a length-N row; antipode is an
    N×N matrix acting linearly on coefficients.
    """

    def __init__(self, alg: StructureAlgebra, comult, counit, antipode, label: str = ""):
        self.alg = alg
        self.comult = as_complex(comult)
        self.counit = as_complex(counit)
        self.antipode = as_complex(antipode)
        self.label = label or alg.label
        self.N = alg.dim
        if self.comult.shape != (self.N, self.N, self.N):
            raise ValueError("comult tensor shape mismatch")
        self.dual_of: HopfAlgebra | None = None
        self._wd: WedderburnData | None = None
        self._dual: HopfAlgebra | None = None

    def __repr__(self):
        return f"HopfAlgebra({self.label}, N={self.N})"

    @property
    def comult_matrix(self):
        return self.comult.reshape(self.N * self.N, self.N)

    @property
    def wd(self) -> WedderburnData:
        if self._wd is None:
            self._wd = wedderburn(self.alg)
        return self._wd

    def element(self, coeffs) -> AlgebraElement:
        return self.alg.element(coeffs)

    @property
    def one(self) -> AlgebraElement:
        return self.alg.one

    def mul(self, x, y):
        return self.alg.mul(x, y)

    def star(self, x):
        return self.alg.star(x)

    def comult_of(self, x):
        """Δ(x) as an (N, N) two-leg coefficient array."""
        return np.tensordot(self.comult, as_complex(x), axes=(2, 0))

    def counit_of(self, x) -> complex:
        return complex(self.counit @ as_complex(x))

    def antipode_of(self, x):
        return self.antipode @ as_complex(x)


def validate_hopf(h: HopfAlgebra, tol: Tolerance = DEFAULT_TOL) -> ResidualReport:
    """One residual per Hopf axiom, nine entries in all.

    The underlying algebra axioms are a separate concern; see
    validate_algebra.
    """
    report = ResidualReport()
    c, m = h.comult, h.alg.mult
    n = h.N
    eye = np.eye(n)

    lhs = np.einsum("abm,mck->abck", c, c)
    rhs = np.einsum("amk,bcm->abck", c, c)
    report.add("hopf.coassociativity", np.abs(lhs - rhs).max(), tol.absolute)

    report.add(
        "hopf.counit-left",
        np.abs(np.einsum("ijk,i->jk", c, h.counit) - eye).max(),
        tol.absolute,
    )
    report.add(
        "hopf.counit-right",
        np.abs(np.einsum("ijk,j->ik", c, h.counit) - eye).max(),
        tol.absolute,
    )

    target = np.outer(h.alg.unit, h.counit)
    s = h.antipode
    left = np.einsum("ijk,ai,ajl->lk", c, s, m, optimize=True)
    right = np.einsum("ijk,aj,ial->lk", c, s, m, optimize=True)
    report.add("hopf.antipode-left", np.abs(left - target).max(), tol.absolute)
    report.add("hopf.antipode-right", np.abs(right - target).max(), tol.absolute)

    # Δ as a unital *-homomorphism: multiplicative, sends 1 to 1⊗1,
    # intertwines the involutions; one entry for the worst of the three
    dmul = np.einsum("ijk,abk->abij", m, c)
    mm = np.einsum("pqi,rsj,pra,qsb->abij", c, c, m, m, optimize=True)
    r_hom = np.abs(dmul - mm).max()
    r_unit = np.abs(h.comult_of(h.alg.unit) - np.outer(h.alg.unit, h.alg.unit)).max()
    t = h.alg.star_matrix
    lhs_star = np.einsum("km,abk->abm", t, c)
    rhs_star = np.einsum("abm,ia,jb->ijm", np.conjugate(c), t, t)
    r_star = np.abs(lhs_star - rhs_star).max()
    report.add("hopf.comult-homomorphism", max(r_hom, r_unit, r_star), tol.absolute)

    r_eps_mult = np.abs(
        np.einsum("ijk,k->ij", m, h.counit) - np.outer(h.counit, h.counit)
    ).max()
    r_eps_unit = abs(h.counit_of(h.alg.unit) - 1.0)
    r_eps_star = np.abs(h.counit @ t - np.conjugate(h.counit)).max()
    report.add(
        "hopf.counit-homomorphism", max(r_eps_mult, r_eps_unit, r_eps_star), tol.absolute
    )

    # S(S(h*)*) = h, and separately S² = id (the Kac property)
    inv_map = s @ t @ np.conjugate(s) @ np.conjugate(t)
    report.add("hopf.antipode-star-involutive", np.abs(inv_map - eye).max(), tol.absolute)
    report.add("hopf.antipode-squared", np.abs(s @ s - eye).max(), tol.absolute)
    return report


def _link_dual_pair(a: StructureAlgebra, b: StructureAlgebra):
    for x, y in ((a, b), (b, a)):
        if not hasattr(x, "dual_partners"):
            x.dual_partners = set()
        x.dual_partners.add(id(y))


def dual(h: HopfAlgebra) -> HopfAlgebra:
    """Dual Hopf algebra on the coefficient-functional basis."""
    if h._dual is None:
        alg = StructureAlgebra(
            mult=h.comult.copy(),
            unit=h.counit.copy(),
            star_matrix=h.antipode.T @ dagger(h.alg.star_matrix),
            label=f"dual({h.label})",
        )
        out = HopfAlgebra(
            alg,
            comult=h.alg.mult.copy(),
            counit=h.alg.unit.copy(),
            antipode=h.antipode.T.copy(),
            label=f"dual({h.label})",
        )
        out.dual_of = h
        h._dual = out
        _link_dual_pair(h.alg, alg)
    return h._dual


def pair(phi: AlgebraElement, x: AlgebraElement) -> complex:
    """Evaluate a dual element on a primal one (bilinear, no conjugation)."""
    partners = getattr(phi.parent, "dual_partners", set())
    if id(x.parent) not in partners:
        raise ParentMismatch("pairing needs an element of H and one of dual(H)")
    return complex(np.dot(phi.coeffs, x.coeffs))


def pair_vec(phi, x) -> complex:
    """Pairing on raw coefficient vectors; callers own the convention."""
    return complex(np.dot(as_complex(phi), as_complex(x)))


# ---------------------------------------------------------------------------
# Haar data


@dataclass
class HaarPair:
    hopf: HopfAlgebra
    e: np.ndarray
    tau: np.ndarray

    def e_element(self) -> AlgebraElement:
        return self.hopf.element(self.e)

    def tau_of(self, x) -> complex:
        return complex(self.tau @ as_complex(x))


def _haar_element(alg_mult, counit_like, label: str):
    """Solve h·e = ε(h)e over all basis h, normalized by ε(e) = 1."""
    d = alg_mult.shape[0]
    lmaps = alg_mult.transpose(0, 2, 1)  # lmaps[i][k,j]
    stacked = lmaps - counit_like[:, None, None] * np.eye(d)[None, :, :]
    system = stacked.reshape(d * d, d)
    null = nullspace(system)
    if null.shape[1] != 1:
        raise NoIntegral(f"{label}: integral space has dimension {null.shape[1]}, not 1")
    e = null[:, 0]
    norm = counit_like @ e
    if abs(norm) < 1e-12:
        raise NoIntegral(f"{label}: integral is annihilated by the counit")
    return e / norm


def haar_pair(h: HopfAlgebra) -> HaarPair:
    """Distinguished projection e in H and tracial Haar state τ in dual(H)."""
    e = _haar_element(h.alg.mult, h.counit, h.label)
    hd = dual(h)
    tau = _haar_element(hd.alg.mult, hd.counit, hd.label)
    return HaarPair(h, e, tau)


def dual_basis_of(family: dict) -> dict:
    """Basis pairing dually with a given basis family (same keys).

    The family is keyed by sortable labels; vectors live in the algebra
    whose coefficient functionals define the pairing.
    """
    labels = sorted(family)
    f = np.stack([as_complex(family[lbl]) for lbl in labels], axis=1)
    w = np.linalg.inv(f.T)
    return {lbl: w[:, idx] for idx, lbl in enumerate(labels)}


def haar_report(h: HopfAlgebra, tol: Tolerance = DEFAULT_TOL) -> ResidualReport:
    report = ResidualReport()
    hp = haar_pair(h)
    e, tau = hp.e, hp.tau
    alg = h.alg
    report.add("haar.e-selfadjoint", np.abs(alg.star(e) - e).max(), tol.absolute)
    report.add("haar.e-idempotent", np.abs(alg.mul(e, e) - e).max(), tol.absolute)
    worst = 0.0
    for i in range(h.N):
        b = np.zeros(h.N)
        b[i] = 1.0
        eps = h.counit[i]
        worst = max(worst, np.abs(alg.mul(b, e) - eps * e).max())
        worst = max(worst, np.abs(alg.mul(e, b) - eps * e).max())
    report.add("haar.e-absorbs", worst, tol.absolute)
    report.add("haar.e-normalized", abs(h.counit_of(e) - 1.0), tol.absolute)

    report.add("haar.tau-unital", abs(hp.tau_of(alg.unit) - 1.0), tol.absolute)
    # τ(xy) = τ(yx) and τ positive on the basis Gram
    tmul = np.einsum("ijk,k->ij", alg.mult, tau)
    report.add("haar.tau-tracial", np.abs(tmul - tmul.T).max(), tol.absolute)
    gram = np.einsum("ai,ajk,k->ij", alg.star_matrix, alg.mult, tau)
    gram = 0.5 * (gram + dagger(gram))
    evals = np.linalg.eigvalsh(gram)
    report.add("haar.tau-positive", max(0.0, -float(evals[0])), tol.absolute)
    # invariance (id⊗τ)Δ(h) = τ(h)·1 and (τ⊗id)Δ(h) = τ(h)·1
    right_inv = np.einsum("ijk,j->ik", h.comult, tau) - np.outer(alg.unit, tau)
    left_inv = np.einsum("ijk,i->jk", h.comult, tau) - np.outer(alg.unit, tau)
    report.add("haar.tau-invariance", max(np.abs(right_inv).max(), np.abs(left_inv).max()), tol.absolute)
    return report


# ---------------------------------------------------------------------------
# comatrix units


@dataclass
class ComatrixUnits:
    hopf: HopfAlgebra
    block_dims: list
    labels: list  # (k, i, j) in lexicographic order
    vectors: dict  # (k, i, j) -> coefficient vector in H

    def __getitem__(self, key):
        return self.vectors[key]

    def element(self, k, i, j) -> AlgebraElement:
        return self.hopf.element(self.vectors[(k, i, j)])

    def basis_matrix(self):
        return np.stack([self.vectors[lbl] for lbl in self.labels], axis=1)


def comatrix_units(h: HopfAlgebra, tol: Tolerance = DEFAULT_TOL) -> ComatrixUnits:
    """Basis of H dual to a self-adjoint matrix-unit family of dual(H).

    The matrix units of dual(H) already satisfy (f_ij)* = f_ji, which is
    exactly what makes the dual family satisfy (w_ij)* = S(w_ji); any
    residual violation is surfaced as CompatibilityFailure.
    """
    hd = dual(h)
    wd = wedderburn(hd.alg)
    labels = sorted(wd.matrix_units)
    f = np.stack([wd.matrix_units[lbl] for lbl in labels], axis=1)
    w = np.linalg.inv(f.T)
    vectors = {lbl: w[:, idx] for idx, lbl in enumerate(labels)}
    cu = ComatrixUnits(h, list(wd.blocks), labels, vectors)
    report = comatrix_report(h, cu, tol)
    if not report.passed:
        worst = max(entry.residual for entry in report.failures())
        raise CompatibilityFailure(
            f"comatrix-unit invariants violated, worst residual {worst:.3e}"
        )
    return cu


def comatrix_report(h: HopfAlgebra, cu: ComatrixUnits, tol: Tolerance = DEFAULT_TOL) -> ResidualReport:
    report = ResidualReport()
    hp = haar_pair(h)
    r_comult = 0.0
    r_counit = 0.0
    r_star = 0.0
    r_haar = 0.0
    for (k, i, j) in cu.labels:
        wij = cu.vectors[(k, i, j)]
        dk = cu.block_dims[k]
        expanded = sum(
            np.multiply.outer(cu.vectors[(k, i, t)], cu.vectors[(k, t, j)])
            for t in range(dk)
        )
        r_comult = max(r_comult, np.abs(h.comult_of(wij) - expanded).max())
        r_counit = max(r_counit, abs(h.counit_of(wij) - (1.0 if i == j else 0.0)))
        r_star = max(
            r_star,
            np.abs(h.star(wij) - h.antipode_of(cu.vectors[(k, j, i)])).max(),
        )
        for (r, s, t) in cu.labels:
            val = hp.tau_of(h.mul(wij, h.star(cu.vectors[(r, s, t)])))
            want = (1.0 / dk) if (k == r and i == s and j == t) else 0.0
            r_haar = max(r_haar, abs(val - want))
    report.add("comatrix.comult-expansion", r_comult, 1e-8)
    report.add("comatrix.counit-delta", r_counit, 1e-8)
    report.add("comatrix.star-antipode", r_star, 1e-8)
    report.add("comatrix.haar-orthogonality", r_haar, 1e-8)
    basis = np.stack([cu.vectors[lbl] for lbl in cu.labels])
    report.add("comatrix.basis-rank", abs(rank_eps(basis, tol) - h.N), 0.5)
    weights = sum(
        (cu.block_dims[k] / h.N) * cu.vectors[(k, i, i)]
        for k, dk in enumerate(cu.block_dims)
        for i in range(dk)
    )
    report.add("comatrix.haar-reconstruction", np.abs(weights - hp.e).max(), tol.absolute)
    return report


def appendix_span_check(h: HopfAlgebra, tol: Tolerance = DEFAULT_TOL) -> int:
    """Dimension of span{(h⊗1)Δ(g)}; equals N² for a Hopf algebra."""
    n = h.N
    vecs = np.einsum("aik,ijb->abkj", h.alg.mult, h.comult, optimize=True)
    return rank_eps(vecs.reshape(n * n, n * n), tol)


# ---------------------------------------------------------------------------
# group builders


def cyclic_table(n: int):
    return [[(i + j) % n for j in range(n)] for i in range(n)]


def product_table(t1, t2):
    n1, n2 = len(t1), len(t2)
    out = []
    for a in range(n1):
        for b in range(n2):
            row = []
            for c in range(n1):
                for d in range(n2):
                    row.append(t1[a][c] * n2 + t2[b][d])
            out.append(row)
    return out


def symmetric_table(n: int):
    """Cayley table of S_n with permutations in lexicographic order."""
    perms = list(permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    table = []
    for p in perms:
        row = []
        for q in perms:
            composed = tuple(p[q[i]] for i in range(n))
            row.append(index[composed])
        table.append(row)
    return table


def _group_data(table):
    table = np.asarray(table, dtype=int)
    n = table.shape[0]
    if table.shape != (n, n) or table.min() < 0 or table.max() >= n:
        raise NotAGroup("table is not an n×n array of indices")
    for i in range(n):
        if len(set(table[i, :])) != n or len(set(table[:, i])) != n:
            raise NotAGroup("table rows/columns are not permutations")
    ident = None
    for e in range(n):
        if all(table[e, j] == j for j in range(n)) and all(
            table[i, e] == i for i in range(n)
        ):
            ident = e
            break
    if ident is None:
        raise NotAGroup("no two-sided identity")
    inv = np.full(n, -1, dtype=int)
    for i in range(n):
        hits = np.where(table[i, :] == ident)[0]
        if len(hits) != 1 or table[hits[0], i] != ident:
            raise NotAGroup(f"element {i} has no two-sided inverse")
        inv[i] = hits[0]
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if table[table[i, j], k] != table[i, table[j, k]]:
                    raise NotAGroup("table is not associative")
    return table, n, ident, inv


def build_group_algebra(table, label: str = "") -> HopfAlgebra:
    """Group algebra C[G]: basis g_i, Δ(g) = g⊗g, S(g) = g⁻¹, g* = g⁻¹."""
    table, n, ident, inv = _group_data(table)
    mult = np.zeros((n, n, n), dtype=np.complex128)
    comult = np.zeros((n, n, n), dtype=np.complex128)
    star = np.zeros((n, n))
    antipode = np.zeros((n, n))
    for i in range(n):
        comult[i, i, i] = 1.0
        star[inv[i], i] = 1.0
        antipode[inv[i], i] = 1.0
        for j in range(n):
            mult[i, j, table[i, j]] = 1.0
    unit = np.zeros(n, dtype=np.complex128)
    unit[ident] = 1.0
    counit = np.ones(n, dtype=np.complex128)
    alg = StructureAlgebra(mult, unit, star, label or f"C[G{n}]")
    return HopfAlgebra(alg, comult, counit, antipode, label or f"C[G{n}]")


def build_function_algebra(table, label: str = "") -> HopfAlgebra:
    """Function algebra C(G): delta-function basis, convolution coproduct."""
    table, n, ident, inv = _group_data(table)
    mult = np.zeros((n, n, n), dtype=np.complex128)
    comult = np.zeros((n, n, n), dtype=np.complex128)
    antipode = np.zeros((n, n))
    for i in range(n):
        mult[i, i, i] = 1.0
        antipode[inv[i], i] = 1.0
        for j in range(n):
            comult[i, j, table[i, j]] = 1.0
    unit = np.ones(n, dtype=np.complex128)
    counit = np.zeros(n, dtype=np.complex128)
    counit[ident] = 1.0
    alg = StructureAlgebra(mult, unit, np.eye(n), label or f"C(G{n})")
    return HopfAlgebra(alg, comult, counit, antipode, label or f"C(G{n})")


def tensor_hopf(h1: HopfAlgebra, h2: HopfAlgebra, label: str = "") -> HopfAlgebra:
    alg = tensor_algebra(h1.alg, h2.alg, label or f"{h1.label}(x){h2.label}")
    d1, d2 = h1.N, h2.N
    comult = np.einsum("ijk,pqr->ipjqkr", h1.comult, h2.comult).reshape(
        d1 * d2, d1 * d2, d1 * d2
    )
    counit = np.kron(h1.counit, h2.counit)
    antipode = kron(h1.antipode, h2.antipode)
    return HopfAlgebra(alg, comult, counit, antipode, label or f"{h1.label}(x){h2.label}")


def hopf_full_report(h: HopfAlgebra, tol: Tolerance = DEFAULT_TOL) -> ResidualReport:
    """Algebra axioms plus Hopf axioms, for library users who want both."""
    report = validate_algebra(h.alg, tol)
    report.extend(validate_hopf(h, tol))
    return report
