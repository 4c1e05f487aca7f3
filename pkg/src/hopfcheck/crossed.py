"""Twisted crossed products A⋊K where K is the dual of the coacting Hopf
algebra.

Elements live on A⊗K with flat index (i, p) ↦ i·N+p. The multiplication

    (a⋊φ)(b⋊ψ) = a (φ₍₁₎·b) û(φ₍₂₎, ψ₍₁₎) ⋊ φ₍₃₎ψ₍₂₎

and the involution

    (a⋊φ)* = (1⋊φ)*(a*⋊1),   (1⋊φ)* = û(S(φ₍₂₎), φ₍₁₎)* ⋊ φ₍₃₎*

are materialized once into a flat StructureAlgebra, so everything
downstream (norms, Wedderburn, validation) reuses the plain algebra
machinery. Flat tensors are capped; the finite tower stays within the cap.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import StructureAlgebra, leg_mul, leg_star, leg_unit, validate_algebra
from .coaction import CoactionMap, TwistedCoactionData, untwisted
from .errors import NotEquivalent, StructureFailure
from .hopf import HopfAlgebra, comatrix_units, dual, haar_pair
from .linalg import DEFAULT_TOL, Tolerance, as_complex
from .report import ResidualReport

FLAT_DIM_CAP = 160


@dataclass
class CrossedProduct:
    base: StructureAlgebra
    hopf: HopfAlgebra  # K, the algebra filling the second slot
    twisted: TwistedCoactionData
    alg: StructureAlgebra = field(repr=False)

    @property
    def acting(self) -> HopfAlgebra:
        """The Hopf algebra whose coaction was crossed (dual of hopf)."""
        return self.twisted.weak.H

    def embed_base(self, a):
        return np.outer(as_complex(a), self.hopf.alg.unit).reshape(-1)

    def embed_base_basis(self, i: int):
        a = np.zeros(self.base.dim)
        a[i] = 1.0
        return self.embed_base(a)

    def embed_dual(self, phi):
        return np.outer(self.base.unit, as_complex(phi)).reshape(-1)

    def pair_element(self, a, phi):
        """Coefficients of a⋊φ."""
        return np.outer(as_complex(a), as_complex(phi)).reshape(-1)

    def mul(self, x, y):
        return self.alg.mul(x, y)

    def star(self, x):
        return self.alg.star(x)

    def mult6(self):
        d, n = self.base.dim, self.hopf.N
        return self.alg.mult.reshape(d, n, d, n, d, n)

    def e1(self, x):
        """E₁(a⋊φ) = φ(e)·a, the canonical expectation onto the base.

        The K-leg is contracted against the coefficients of the Haar
        projection e of the acting algebra, which is exactly φ ↦ φ(e).
        """
        e = haar_pair(self.acting).e
        mat = as_complex(x).reshape(self.base.dim, self.hopf.N)
        return mat @ e


def build_crossed(t: TwistedCoactionData, tol: Tolerance = DEFAULT_TOL) -> CrossedProduct:
    c = t.weak
    q = c.H
    k = dual(q)
    da, n = c.A.dim, q.N
    dim = da * n
    if dim > FLAT_DIM_CAP:
        raise StructureFailure(
            f"crossed product dimension {dim} exceeds the flat-tensor cap {FLAT_DIM_CAP}"
        )

    r = c.rho_basis()
    actb = r.transpose(2, 1, 0)  # actb[a, x, j] = (f_a · b_j)_x
    mk = k.alg.mult  # multiplication of K (= comultiplication tensor of Q)
    ck = k.comult  # comultiplication of K (= multiplication tensor of Q)
    c3 = np.einsum("amp,bcm->abcp", ck, ck)  # triple Sweedler legs of K

    mult = np.einsum(
        "abcp,deq,ayj,wbd,ywz,izk,cer->ipjqkr",
        c3,
        ck,
        actb,
        t.u,
        c.A.mult,
        c.A.mult,
        mk,
        optimize=True,
    ).reshape(dim, dim, dim)

    unit = np.outer(c.A.unit, k.alg.unit).reshape(-1)

    # (1⋊f_q)* as a two-leg array, then right-multiplied by a*⋊1
    uc = np.einsum("xy,yma->xma", c.A.star_matrix, np.conjugate(t.u))
    s1 = np.einsum(
        "abcq,mb,xma,yc->xyq",
        np.conjugate(c3),
        np.conjugate(k.antipode),
        uc,
        k.alg.star_matrix,
        optimize=True,
    ).reshape(dim, n)
    embed_star = np.einsum("zj,w->zwj", c.A.star_matrix, k.alg.unit).reshape(dim, da)
    star = np.einsum("pQr,pq,Qj->rjq", mult, s1, embed_star, optimize=True).reshape(
        dim, dim
    )

    alg = StructureAlgebra(mult, unit, star, f"{c.A.label}|x|{k.label}")
    cp = CrossedProduct(c.A, k, t, alg)

    check = validate_algebra(alg, tol)
    if check["algebra.associativity"].residual > max(tol.absolute, 1e-8):
        raise StructureFailure(
            "crossed-product associativity residual "
            f"{check['algebra.associativity'].residual:.3e}; cocycle data inconsistent"
        )
    return cp


def crossed_report(cp: CrossedProduct, tol: Tolerance = DEFAULT_TOL) -> ResidualReport:
    """Algebra axioms plus the covariance and dual cocycle relations."""
    report = validate_algebra(cp.alg, tol)
    c = cp.twisted.weak
    act = c.rho_basis().transpose(2, 1, 0)
    ck, mk = cp.hopf.comult, cp.hopf.alg.mult
    m6 = cp.mult6()
    unit_a, unit_k = cp.base.unit, cp.hopf.alg.unit

    # (1⋊f_p)(b_j⋊1) = (f_p(1)·b_j)⋊f_p(2)
    cov_lhs = np.einsum("ipjqxw,i,q->pjxw", m6, unit_a, unit_k, optimize=True)
    cov_rhs = np.einsum("awp,axj->pjxw", ck, act, optimize=True)
    report.add("crossed.covariance", np.abs(cov_lhs - cov_rhs).max(), 1e-10)

    # (1⋊f_p)(1⋊f_q) = û(f_p(1), f_q(1)) ⋊ f_p(2)·f_q(2)
    coc_lhs = np.einsum("ipjqxw,i,j->pqxw", m6, unit_a, unit_a, optimize=True)
    coc_rhs = np.einsum(
        "abp,cdq,xac,bdw->pqxw", ck, ck, cp.twisted.u, mk, optimize=True
    )
    report.add("crossed.dual-cocycle-relation", np.abs(coc_lhs - coc_rhs).max(), tol.absolute)

    # untwisted data: (1⋊φ)* = 1⋊φ*
    if np.abs(cp.twisted.u - leg_unit(cp.twisted.legs3)).max() < tol.absolute:
        worst = 0.0
        for p in range(cp.hopf.N):
            phi = np.zeros(cp.hopf.N)
            phi[p] = 1.0
            lhs = cp.star(cp.embed_dual(phi))
            rhs = cp.embed_dual(cp.hopf.alg.star(phi))
            worst = max(worst, np.abs(lhs - rhs).max())
        report.add("crossed.untwisted-dual-star", worst, tol.absolute)
    return report


def e1_gram(cp: CrossedProduct, trace_row) -> np.ndarray:
    """Gram matrix of ⟨x, y⟩ = trace(E₁(y* x)) over the algebra basis."""
    d = cp.alg.dim
    gram = np.zeros((d, d), dtype=np.complex128)
    star_cols = cp.alg.star_matrix  # star of basis e_j is column j
    for i in range(d):
        for j in range(d):
            prod = cp.mul(star_cols[:, j], np.eye(d)[i])
            gram[j, i] = trace_row @ cp.e1(prod)
    return gram


# ---------------------------------------------------------------------------
# quasi-basis


@dataclass
class QuasiBasis:
    cp: CrossedProduct
    labels: list  # (k, i, j), lexicographic
    block_dims: list
    elements: dict  # label -> coefficient vector in cp.alg

    def matrix(self):
        return np.stack([self.elements[lbl] for lbl in self.labels])


def quasi_basis(cp: CrossedProduct) -> QuasiBasis:
    """W_I = √d_k ⋊ w_ij^k with w the comatrix units of the second slot."""
    cu = comatrix_units(cp.hopf)
    elements = {}
    for (k, i, j) in cu.labels:
        w = cu.vectors[(k, i, j)]
        elements[(k, i, j)] = np.sqrt(cu.block_dims[k]) * cp.embed_dual(w)
    return QuasiBasis(cp, list(cu.labels), list(cu.block_dims), elements)


def quasi_basis_report(qb: QuasiBasis, tol: Tolerance = DEFAULT_TOL) -> ResidualReport:
    cp = qb.cp
    report = ResidualReport()
    d = cp.alg.dim
    worst_left = 0.0
    worst_right = 0.0
    for x_idx in range(d):
        x = np.eye(d)[x_idx]
        left = np.zeros(d, dtype=np.complex128)
        right = np.zeros(d, dtype=np.complex128)
        for lbl in qb.labels:
            w = qb.elements[lbl]
            ws = cp.star(w)
            left += cp.mul(ws, cp.embed_base(cp.e1(cp.mul(w, x))))
            right += cp.mul(cp.embed_base(cp.e1(cp.mul(x, ws))), w)
        worst_left = max(worst_left, np.abs(left - x).max())
        worst_right = max(worst_right, np.abs(right - x).max())
    report.add("quasi-basis.left-reconstruction", worst_left, 10 * tol.absolute)
    report.add("quasi-basis.right-reconstruction", worst_right, 10 * tol.absolute)

    index = sum(cp.mul(cp.star(qb.elements[lbl]), qb.elements[lbl]) for lbl in qb.labels)
    n = cp.acting.N
    report.add(
        "quasi-basis.index",
        np.abs(index - n * cp.alg.unit).max(),
        10 * tol.absolute,
    )
    return report


# ---------------------------------------------------------------------------
# dual coaction and the canonical unitary V


def dual_coaction(cp: CrossedProduct) -> CoactionMap:
    """ρ̂(a⋊φ) = (a⋊φ₍₁₎)⊗φ₍₂₎, a full coaction of K on the crossed product."""
    da, n = cp.base.dim, cp.hopf.N
    rho = np.einsum(
        "jJ,pwq->jpwJq", np.eye(da), cp.hopf.comult
    ).reshape(da * n * n, da * n)
    return CoactionMap(cp.alg, cp.hopf, rho)


def v_unitary(cp: CrossedProduct) -> np.ndarray:
    """V = Σ_p (1⋊f_p)⊗b_p in cp.alg⊗Q, as a two-leg array."""
    n = cp.hopf.N
    return np.einsum("j,qh->jqh", cp.base.unit, np.eye(n)).reshape(
        cp.alg.dim, n
    )


def v_report(cp: CrossedProduct, tol: Tolerance = DEFAULT_TOL) -> ResidualReport:
    report = ResidualReport()
    q = cp.acting
    legs2 = [cp.alg, q.alg]
    legs3 = [cp.alg, q.alg, q.alg]
    v = v_unitary(cp)
    vs = leg_star(legs2, v)
    one2 = leg_unit(legs2)
    r_unit = max(
        np.abs(leg_mul(legs2, v, vs) - one2).max(),
        np.abs(leg_mul(legs2, vs, v) - one2).max(),
    )
    report.add("v.unitary", r_unit, tol.absolute)

    # u = V₁₂ V₁₃ (id⊗Δ)(V*) with the base leg embedded
    x12 = np.einsum("ch,r->chr", v, q.alg.unit)
    x13 = np.einsum("cr,h->chr", v, q.alg.unit)
    x3 = np.einsum("cm,hrm->chr", vs, q.comult)
    u_rec = leg_mul(legs3, leg_mul(legs3, x12, x13), x3)
    u_emb = np.einsum("jpr,w->jwpr", cp.twisted.u, cp.hopf.alg.unit).reshape(
        cp.alg.dim, q.N, q.N
    )
    report.add("v.u-recovery", np.abs(u_rec - u_emb).max(), tol.absolute)

    # û(φ,ψ) = V̂(φ₍₁₎)V̂(ψ₍₁₎)V̂*(φ₍₂₎ψ₍₂₎)
    n = q.N
    ck, mk = cp.hopf.comult, cp.hopf.alg.mult
    ed = [cp.embed_dual(np.eye(n)[m]) for m in range(n)]
    sed = [cp.star(x) for x in ed]
    worst = 0.0
    for p in range(n):
        for r in range(n):
            acc = np.zeros(cp.alg.dim, dtype=np.complex128)
            for a in range(n):
                for b in range(n):
                    if abs(ck[a, b, p]) < 1e-15:
                        continue
                    for c_ in range(n):
                        for d_ in range(n):
                            coef = ck[a, b, p] * ck[c_, d_, r]
                            if abs(coef) < 1e-15:
                                continue
                            tail = sum(
                                mk[b, d_, m] * sed[m] for m in range(n)
                            )
                            acc += coef * cp.mul(cp.mul(ed[a], ed[c_]), tail)
            worst = max(
                worst, np.abs(acc - cp.embed_base(cp.twisted.u[:, p, r])).max()
            )
    report.add("v.uhat-recovery", worst, tol.absolute)

    # ρ(a) = V (a⊗1) V*
    r_arr = cp.twisted.weak.rho_basis()
    worst = 0.0
    for j in range(cp.base.dim):
        emb = np.einsum("c,h->ch", cp.embed_base_basis(j), q.alg.unit)
        conj = leg_mul(legs2, leg_mul(legs2, v, emb), vs)
        want = np.einsum("ih,w->iwh", r_arr[j], cp.hopf.alg.unit).reshape(
            cp.alg.dim, q.N
        )
        worst = max(worst, np.abs(conj - want).max())
    report.add("v.implements-coaction", worst, tol.absolute)
    return report


# ---------------------------------------------------------------------------
# exterior-equivalence isomorphism


@dataclass
class ExteriorIso:
    cp1: CrossedProduct
    cp2: CrossedProduct
    phi_matrix: np.ndarray
    psi_matrix: np.ndarray
    report: ResidualReport

    def phi(self, x):
        return self.phi_matrix @ as_complex(x)

    def psi(self, z):
        return self.psi_matrix @ as_complex(z)


def iso_exterior(
    cp1: CrossedProduct, cp2: CrossedProduct, v, tol: Tolerance = DEFAULT_TOL
) -> ExteriorIso:
    """Φ(a⋊φ) = a v̂*(φ₍₁₎) ⋊ φ₍₂₎ between exterior-equivalent products."""
    a = cp1.base
    ck = cp1.hopf.comult
    v = as_complex(v)
    vs = leg_star([a, cp1.acting.alg], v)
    p_star = np.einsum("jyx,yp->xjp", a.mult, vs, optimize=True)
    p_plain = np.einsum("jyx,yp->xjp", a.mult, v, optimize=True)
    d = cp1.alg.dim
    phi = np.einsum("pwq,xjp->xwjq", ck, p_star, optimize=True).reshape(d, d)
    psi = np.einsum("pwq,xjp->xwjq", ck, p_plain, optimize=True).reshape(d, d)

    report = ResidualReport()
    report.add("iso.inverse", np.abs(phi @ psi - np.eye(d)).max(), 10 * tol.absolute)
    report.add("iso.unital", np.abs(phi @ cp1.alg.unit - cp2.alg.unit).max(), 10 * tol.absolute)
    t1, t2 = cp1.alg.mult, cp2.alg.mult
    r_mult = np.abs(
        np.einsum("pqr,rK->pqK", t1, phi, optimize=True)
        - np.einsum("pP,qQ,PQK->pqK", phi, phi, t2, optimize=True)
    ).max()
    report.add("iso.multiplicative", r_mult, 10 * tol.absolute)
    r_star = np.abs(
        phi @ cp1.alg.star_matrix - cp2.alg.star_matrix @ np.conjugate(phi)
    ).max()
    report.add("iso.star", r_star, 10 * tol.absolute)
    # E₁ compatibility: E₁ of cp1 equals E₁ of cp2 after Φ
    e1_1 = np.stack([cp1.e1(np.eye(d)[i]) for i in range(d)], axis=1)
    e1_2 = np.stack([cp2.e1(phi[:, i]) for i in range(d)], axis=1)
    report.add("iso.expectation", np.abs(e1_1 - e1_2).max(), 10 * tol.absolute)
    if not report.passed:
        worst = max(entry.residual for entry in report.failures())
        raise NotEquivalent(f"exterior isomorphism residual {worst:.3e}")
    return ExteriorIso(cp1, cp2, phi, psi, report)


def iterate_crossed(cp: CrossedProduct, tol: Tolerance = DEFAULT_TOL) -> CrossedProduct:
    """The crossed product of the dual coaction, on base cp.alg."""
    return build_crossed(untwisted(dual_coaction(cp)), tol)
