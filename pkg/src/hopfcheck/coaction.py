"""Coactions of a Hopf algebra on a *-algebra, twisted by a unitary cocycle.

A coaction of Q on A is stored as the matrix of ρ: A → A⊗Q on coefficient
vectors, row index flattened as i·N+h (A-leg major). The twist u is a
three-leg coefficient array over (A, Q, Q). Induced actions of dual(Q)
contract the Q-leg against functional coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import (
    AlgebraElement,
    StructureAlgebra,
    leg_mul,
    leg_star,
    leg_unit,
    matrix_algebra,
    nullspace,
    tensor_algebra,
)
from .errors import NotAnAction, NotCounital, ParentMismatch
from .hopf import HopfAlgebra, build_function_algebra, dual, haar_pair
from .linalg import DEFAULT_TOL, Tolerance, as_complex
from .report import ResidualReport


@dataclass
class CoactionMap:
    A: StructureAlgebra
    H: HopfAlgebra
    rho: np.ndarray  # (dim A · N, dim A)

    def __post_init__(self):
        self.rho = as_complex(self.rho)
        expected = (self.A.dim * self.H.N, self.A.dim)
        if self.rho.shape != expected:
            raise ValueError(f"rho must have shape {expected}")

    @property
    def legs(self):
        return [self.A, self.H.alg]

    def rho_of(self, a):
        """ρ(a) as a (dim A, N) two-leg array."""
        return (self.rho @ as_complex(a)).reshape(self.A.dim, self.H.N)

    def rho_basis(self):
        """Array R with R[j] = ρ(b_j), shape (dim A, dim A, N)."""
        return self.rho.reshape(self.A.dim, self.H.N, self.A.dim).transpose(2, 0, 1)


def trivial_coaction(a: StructureAlgebra, h: HopfAlgebra) -> CoactionMap:
    rho = np.einsum("ij,p->ipj", np.eye(a.dim), h.alg.unit).reshape(
        a.dim * h.N, a.dim
    )
    return CoactionMap(a, h, rho)


def act(phi: AlgebraElement, a: AlgebraElement, c: CoactionMap) -> AlgebraElement:
    """Induced action of dual(Q): φ·a = (id⊗φ)ρ(a)."""
    if a.parent is not c.A:
        raise ParentMismatch("element does not live in the coacted algebra")
    partners = getattr(phi.parent, "dual_partners", set())
    if id(c.H.alg) not in partners:
        raise ParentMismatch("functional does not live in the dual of the coacting algebra")
    return c.A.element(c.rho_of(a.coeffs) @ phi.coeffs)


def act_vec(phi, a, c: CoactionMap):
    return c.rho_of(a) @ as_complex(phi)


def validate_coaction(c: CoactionMap, tol: Tolerance = DEFAULT_TOL) -> ResidualReport:
    """Unital *-homomorphism, counit, and full-coaction residuals."""
    report = ResidualReport()
    r = c.rho_basis()
    ma, mh = c.A.mult, c.H.alg.mult
    lhs = np.einsum("ijk,kpq->ijpq", ma, r, optimize=True)
    rhs = np.einsum("iap,jbq,abc,pqd->ijcd", r, r, ma, mh, optimize=True)
    r_mult = np.abs(lhs - rhs).max()
    r_unit = np.abs(c.rho_of(c.A.unit) - np.outer(c.A.unit, c.H.alg.unit)).max()
    star_lhs = np.einsum("kj,kpq->jpq", c.A.star_matrix, r)
    star_rhs = np.stack([leg_star(c.legs, r[j]) for j in range(c.A.dim)])
    r_star = np.abs(star_lhs - star_rhs).max()
    report.add("coaction.star-homomorphism", max(r_mult, r_unit, r_star), tol.absolute)

    counit_side = np.einsum("kpq,q->pk", r, c.H.counit)
    report.add("coaction.counit", np.abs(counit_side - np.eye(c.A.dim)).max(), tol.absolute)

    full_lhs = np.einsum("kbh,bpq->kpqh", r, r, optimize=True)
    full_rhs = np.einsum("kbm,ijm->kbij", r, c.H.comult, optimize=True)
    report.add("coaction.full", np.abs(full_lhs - full_rhs).max(), tol.absolute)
    return report


@dataclass
class TwistedCoactionData:
    weak: CoactionMap
    u: np.ndarray  # (dim A, N, N)

    def __post_init__(self):
        self.u = as_complex(self.u)
        a, h = self.weak.A.dim, self.weak.H.N
        if self.u.shape != (a, h, h):
            raise ValueError(f"u must have shape {(a, h, h)}")

    @property
    def legs3(self):
        return [self.weak.A, self.weak.H.alg, self.weak.H.alg]


def untwisted(c: CoactionMap) -> TwistedCoactionData:
    return TwistedCoactionData(c, leg_unit([c.A, c.H.alg, c.H.alg]))


def validate_twisted(t: TwistedCoactionData, tol: Tolerance = DEFAULT_TOL) -> ResidualReport:
    report = ResidualReport()
    c = t.weak
    r = c.rho_basis()
    legs3 = t.legs3
    ch = c.H.comult

    # (ρ⊗id)∘ρ = Ad(u)∘(id⊗Δ)∘ρ on every basis element
    lhs = np.einsum("kbh,bpq->kpqh", r, r, optimize=True)
    mid = np.einsum("kbm,ijm->kbij", r, ch, optimize=True)
    ustar = leg_star(legs3, t.u)
    rhs = np.stack(
        [leg_mul(legs3, leg_mul(legs3, t.u, mid[k]), ustar) for k in range(c.A.dim)]
    )
    report.add("twisted.coaction-relation", np.abs(lhs - rhs).max(), tol.absolute)

    legs4 = legs3 + [c.H.alg]
    x1 = np.einsum("apq,r->apqr", t.u, c.H.alg.unit)
    x2 = np.einsum("aqr,ijq->aijr", t.u, ch)
    cocycle_lhs = leg_mul(legs4, x1, x2)
    y1 = np.einsum("aqr,abh->bhqr", t.u, r, optimize=True)
    y2 = np.einsum("apr,ijr->apij", t.u, ch)
    cocycle_rhs = leg_mul(legs4, y1, y2)
    report.add("twisted.cocycle-identity", np.abs(cocycle_lhs - cocycle_rhs).max(), tol.absolute)

    target = np.outer(c.A.unit, c.H.alg.unit)
    mid_counit = np.einsum("apr,r->ap", t.u, c.H.counit)
    last_counit = np.einsum("apr,p->ar", t.u, c.H.counit)
    report.add(
        "twisted.counit-normalization",
        max(np.abs(mid_counit - target).max(), np.abs(last_counit - target).max()),
        tol.absolute,
    )

    one3 = leg_unit(legs3)
    r_unit = max(
        np.abs(leg_mul(legs3, t.u, ustar) - one3).max(),
        np.abs(leg_mul(legs3, ustar, t.u) - one3).max(),
    )
    report.add("twisted.u-unitary", r_unit, tol.absolute)
    return report


def exterior_transform(t: TwistedCoactionData, v, tol: Tolerance = DEFAULT_TOL) -> TwistedCoactionData:
    """Perturb (ρ, u) by a counital unitary v ∈ A⊗Q.

    ρ'(a) = v ρ(a) v*, u' = (v⊗1)[(ρ⊗id)(v)] u [(id⊗Δ)(v*)].
    """
    c = t.weak
    v = as_complex(v)
    legs2 = [c.A, c.H.alg]
    counital = np.einsum("ap,p->a", v, c.H.counit)
    if np.abs(counital - c.A.unit).max() > max(tol.absolute, 1e-8):
        raise NotCounital("(id⊗ε)(v) differs from 1")

    vstar = leg_star(legs2, v)
    r = c.rho_basis()
    cols = [
        leg_mul(legs2, leg_mul(legs2, v, r[j]), vstar).reshape(-1)
        for j in range(c.A.dim)
    ]
    rho1 = np.stack(cols, axis=1)

    legs3 = t.legs3
    x1 = np.einsum("ap,r->apr", v, c.H.alg.unit)
    x2 = np.einsum("ah,abq->bqh", v, r, optimize=True)
    x3 = np.einsum("am,ijm->aij", vstar, c.H.comult)
    u1 = leg_mul(legs3, leg_mul(legs3, leg_mul(legs3, x1, x2), t.u), x3)
    return TwistedCoactionData(CoactionMap(c.A, c.H, rho1), u1)


def fixed_point(c: CoactionMap):
    """Basis of {a : ρ(a) = a⊗1} and the averaging map E = (id⊗τ)∘ρ."""
    da, n = c.A.dim, c.H.N
    embed = np.einsum("ij,p->ipj", np.eye(da), c.H.alg.unit).reshape(da * n, da)
    basis = nullspace(c.rho - embed)
    tau = haar_pair(c.H).tau
    emat = np.einsum("jih,h->ij", c.rho_basis(), tau)
    return basis, emat


def conjugate_coaction(c: CoactionMap, y) -> CoactionMap:
    """The coaction (Ad(y)⊗id)∘ρ∘Ad(y*) for a unitary y of A."""
    a = c.A
    y = as_complex(y)
    ys = a.star(y)
    eye = np.eye(a.dim)
    cols = []
    for j in range(a.dim):
        inner = c.rho_of(a.mul(a.mul(ys, eye[j]), y))
        moved = np.stack([a.mul(a.mul(y, inner[:, t]), ys) for t in range(c.H.N)], axis=1)
        cols.append(moved.reshape(-1))
    return CoactionMap(a, c.H, np.stack(cols, axis=1))


def coaction_from_group_action(
    a: StructureAlgebra, table, mats, tol: Tolerance = DEFAULT_TOL
) -> CoactionMap:
    """Coaction of the function algebra of G from matrices α_t on A."""
    h = build_function_algebra(table)
    table = np.asarray(table, dtype=int)
    n = table.shape[0]
    if len(mats) != n:
        raise NotAnAction("need one matrix per group element")
    mats = [as_complex(m) for m in mats]
    tolerance = max(tol.absolute, 1e-8)
    ident = int(np.flatnonzero(h.counit.real)[0])
    if np.abs(mats[ident] - np.eye(a.dim)).max() > tolerance:
        raise NotAnAction("identity element must act as the identity map")
    for s in range(n):
        for t_ in range(n):
            if np.abs(mats[s] @ mats[t_] - mats[table[s, t_]]).max() > tolerance:
                raise NotAnAction(f"α_{s}∘α_{t_} differs from α_{{s·t}}")
    for s, m in enumerate(mats):
        r_mult = np.abs(
            np.einsum("ijk,ka->ija", a.mult, m, optimize=True)
            - np.einsum("ip,jq,pqa->ija", m, m, a.mult, optimize=True)
        ).max()
        r_star = np.abs(m @ a.star_matrix - a.star_matrix @ np.conjugate(m)).max()
        r_unit = np.abs(m @ a.unit - a.unit).max()
        if max(r_mult, r_star, r_unit) > tolerance:
            raise NotAnAction(f"α_{s} is not a unital *-automorphism")
    rho = np.zeros((a.dim * n, a.dim), dtype=np.complex128)
    for t_ in range(n):
        for i in range(a.dim):
            rho[i * n + t_, :] = mats[t_][i, :]
    return CoactionMap(a, h, rho)


def leg_swap_matrix(dims, perm):
    """Permutation matrix realizing a reorder of tensor legs on flat vectors."""
    total = int(np.prod(dims))
    out = np.zeros((total, total))
    for flat in range(total):
        idx = np.unravel_index(flat, dims)
        new_idx = tuple(idx[p] for p in perm)
        new_flat = np.ravel_multi_index(new_idx, tuple(dims[p] for p in perm))
        out[new_flat, flat] = 1.0
    return out


def amplify(t: TwistedCoactionData, n: int) -> TwistedCoactionData:
    """Tensor the twisted coaction with the identity on M_n."""
    if n == 1:
        return t
    c = t.weak
    mn = matrix_algebra(n)
    base = tensor_algebra(c.A, mn, f"{c.A.label}(x)M{n}")
    r = c.rho_basis()
    eye2 = np.eye(n * n)
    rho = np.einsum("jih,wx->iwhjx", r, eye2).reshape(
        base.dim * c.H.N, base.dim
    )
    u = np.einsum("apq,w->awpq", t.u, mn.unit).reshape(base.dim, c.H.N, c.H.N)
    return TwistedCoactionData(CoactionMap(base, c.H, rho), u)


def check_saturated(c: CoactionMap, cp, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Whether A(1⋊e)A spans the whole crossed product.

    Here e is the distinguished projection of the algebra filling the
    second slot, the dual of the coacting Hopf algebra.
    """
    from .linalg import rank_eps

    e = haar_pair(c.H).tau
    mid = cp.embed_dual(e)
    da = c.A.dim
    rows = []
    for i in range(da):
        left = cp.mul(cp.embed_base_basis(i), mid)
        for j in range(da):
            rows.append(cp.mul(left, cp.embed_base_basis(j)))
    return rank_eps(np.stack(rows), tol) == cp.alg.dim
