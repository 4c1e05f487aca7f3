"""The model tower: tensor powers of the base crossed product.

The base is the crossed product of the coaction of q on itself by
comultiplication; it is a full matrix algebra of size N. Level n is the
n-th tensor power A_n with the coaction ρ_n = Ad(u_n)∘(·⊗1), where u_n
is the ordered product of the shifted copies of the canonical unitary.
Each level carries the distinguished projection p_n = 1⊗…⊗(e⋊1), which
is a Rohlin projection relative to the copy of A_{n-1}: it commutes
with everything embedded from below and Haar-averages to 1/N exactly.

u_n also admits a closed form, a sum over comatrix-unit chains weighted
by the dual matrix units; both constructions are compared at build time
since later modules rely on the product form being the cheap one.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import (
    StructureAlgebra,
    leg_mul,
    leg_star,
    matrix_algebra,
    mvn_equivalent,
    tensor_algebra,
    wedderburn,
)
from .coaction import CoactionMap, untwisted
from .crossed import CrossedProduct, build_crossed, v_unitary
from .errors import LevelTooLarge, RankObstruction
from .hopf import HopfAlgebra, comatrix_units, dual, haar_pair
from .linalg import DEFAULT_TOL, Tolerance, as_complex
from .report import ResidualReport
from .rohlin import approx_rep_witness, check_rohlin_projection, rohlin_witness

LEVEL_DIM_CAP = 128


@dataclass
class TowerLevel:
    n: int
    base: CrossedProduct
    algebra: StructureAlgebra
    u: np.ndarray  # two-leg array on (A_n, q)
    rho: CoactionMap
    p: np.ndarray
    inclusion: np.ndarray  # (dim A_n, dim A_{n-1}), a ↦ a⊗1
    prev: "TowerLevel | None" = field(default=None, repr=False)
    report: ResidualReport = field(default_factory=ResidualReport, repr=False)

    @property
    def hopf(self) -> HopfAlgebra:
        return self.rho.H


def build_base(q: HopfAlgebra, tol: Tolerance = DEFAULT_TOL) -> CrossedProduct:
    """Crossed product of the comultiplication coaction of q on itself."""
    c = CoactionMap(q.alg, q, q.comult_matrix)
    return build_crossed(untwisted(c), tol)


def _closed_form(base: CrossedProduct, n: int) -> np.ndarray:
    """Σ_k Σ_ij V̂(w_{i j₁}^k)⊗…⊗V̂(w_{j_{n-1} j}^k)·φ_ij^k as a two-leg array."""
    q = base.acting
    cu = comatrix_units(base.hopf)
    mu = wedderburn(dual(base.hopf).alg).matrix_units
    da = base.alg.dim
    out = np.zeros((da,) * n + (q.N,), dtype=np.complex128)
    for k, dk in enumerate(cu.block_dims):
        t_k = np.zeros((dk, dk, da), dtype=np.complex128)
        phi = np.zeros((dk, dk, q.N), dtype=np.complex128)
        for i in range(dk):
            for j in range(dk):
                t_k[i, j] = base.embed_dual(cu.vectors[(k, i, j)])
                phi[i, j] = mu[(k, i, j)]
        chain = t_k
        for _ in range(n - 1):
            chain = np.moveaxis(np.tensordot(chain, t_k, axes=([1], [0])), -2, 1)
        out += np.tensordot(chain, phi, axes=([0, 1], [0, 1]))
    return out.reshape(-1, q.N)


def build_level(base: CrossedProduct, prev: TowerLevel | None = None,
                tol: Tolerance = DEFAULT_TOL) -> TowerLevel:
    q = base.acting
    report = ResidualReport()
    if prev is None:
        n = 1
        alg = base.alg
        u = v_unitary(base)
        inclusion = alg.unit[:, None].copy()
    else:
        n = prev.n + 1
        dim = prev.algebra.dim * base.alg.dim
        if dim > LEVEL_DIM_CAP:
            raise LevelTooLarge(f"level {n} would have dimension {dim} > {LEVEL_DIM_CAP}")
        alg = tensor_algebra(prev.algebra, base.alg, f"A{n}")
        inclusion = np.einsum(
            "ij,k->ikj", np.eye(prev.algebra.dim), base.alg.unit
        ).reshape(dim, prev.algebra.dim)
        u_emb = np.einsum("ip,k->ikp", prev.u, base.alg.unit).reshape(dim, q.N)
        v_n = np.einsum("i,cp->icp", prev.algebra.unit, v_unitary(base)).reshape(dim, q.N)
        u = leg_mul([alg, q.alg], u_emb, v_n)
        report.add("tower.closed-form", np.abs(u - _closed_form(base, n)).max(), 1e-12)

    legs2 = [alg, q.alg]
    ustar = leg_star(legs2, u)
    eye = np.eye(alg.dim)
    cols = [
        leg_mul(legs2, leg_mul(legs2, u, np.outer(eye[j], q.alg.unit)), ustar).reshape(-1)
        for j in range(alg.dim)
    ]
    rho = CoactionMap(alg, q, np.stack(cols, axis=1))

    p1 = base.embed_base(haar_pair(q).e)
    p = p1 if prev is None else np.einsum("i,c->ic", prev.algebra.unit, p1).reshape(-1)

    x1 = np.einsum("ch,r->chr", u, q.alg.unit)
    x2 = np.einsum("cr,h->chr", u, q.alg.unit)
    lhs = leg_mul([alg, q.alg, q.alg], x1, x2)
    rhs = np.einsum("cm,hrm->chr", u, q.comult)
    report.add("tower.coaction-cocycle", np.abs(lhs - rhs).max(), 10 * tol.absolute)

    if prev is not None:
        worst = 0.0
        rprev = prev.rho.rho_basis()
        for j in range(prev.algebra.dim):
            lhs_j = np.einsum("bh,cb->ch", rprev[j], inclusion)
            worst = max(worst, np.abs(lhs_j - rho.rho_of(inclusion[:, j])).max())
        report.add("tower.inclusion-compatible", worst, 10 * tol.absolute)

    return TowerLevel(n, base, alg, u, rho, p, inclusion, prev, report)


def build_tower(q: HopfAlgebra, levels: int, tol: Tolerance = DEFAULT_TOL) -> list[TowerLevel]:
    base = build_base(q, tol)
    out = [build_level(base, None, tol)]
    for _ in range(levels - 1):
        out.append(build_level(base, out[-1], tol))
    return out


def rohlin_report(level: TowerLevel, tol: Tolerance = DEFAULT_TOL):
    """The level's Rohlin projection and witness, with all identity residuals.

    Returns (RohlinWitness, ApproxRepWitness, ResidualReport). The
    commutator scope of p_n is the embedded copy of A_{n-1}; p_n is not
    central in A_n itself and no check pretends it is.
    """
    t = untwisted(level.rho)
    rw = rohlin_witness(t, level.p, scope=level.inclusion.T, tol=tol)
    wit = approx_rep_witness(t, level.u, tol)
    report = ResidualReport()
    report.extend(check_rohlin_projection(rw, tol))
    report.extend(wit.report)
    report.extend(level.report)
    return rw, wit, report


def _family_defect(alg: StructureAlgebra, units: dict, m: int) -> float:
    """Worst deviation of {e_ij} from matrix-unit relations."""
    worst = 0.0
    for i in range(m):
        for j in range(m):
            eij = as_complex(units[(i, j)])
            worst = max(worst, alg.norm(alg.star(eij) - units[(j, i)]))
            for s in range(m):
                for t in range(m):
                    prod = alg.mul(eij, units[(s, t)])
                    expect = units[(i, t)] if j == s else 0.0
                    worst = max(worst, alg.norm(prod - expect))
    return worst


def intertwine_homomorphism(rho_matrix, domain: StructureAlgebra, n: int, units: dict,
                            tol: Tolerance = DEFAULT_TOL):
    """Unitary u with ρ(x) = u(x⊗I_n)u* on the span of a matrix-unit family.

    rho_matrix is a unital *-homomorphism domain → domain⊗M_n on
    coefficient vectors and units a family {e_ij} summing to 1. Raises
    RankObstruction when ρ(e_11) and e_11⊗1 are not Murray-von Neumann
    equivalent in the target; otherwise the partial isometry between
    them is assembled blockwise and corner-shifted along the family.
    Returns (u, report).
    """
    rho_matrix = as_complex(rho_matrix)
    amb = tensor_algebra(domain, matrix_algebra(n), f"{domain.label}(x)M{n}")
    if rho_matrix.shape != (amb.dim, domain.dim):
        raise ValueError("homomorphism matrix has the wrong shape")
    m = max(i for i, _ in units) + 1
    report = ResidualReport()
    report.add("intertwine.matrix-units", _family_defect(domain, units, m), 10 * tol.absolute)
    ident = sum(as_complex(units[(i, i)]) for i in range(m))
    report.add("intertwine.family-unital", domain.norm(ident - domain.unit), 10 * tol.absolute)

    mn_unit = np.eye(n).reshape(-1)

    def embed(x):
        return np.einsum("i,w->iw", as_complex(x), mn_unit).reshape(-1)

    p = rho_matrix @ as_complex(units[(0, 0)])
    e11_amb = embed(units[(0, 0)])
    wd = wedderburn(amb)
    if not mvn_equivalent(p, e11_amb, wd, tol):
        raise RankObstruction("ρ(e_11) and e_11⊗1 have different block ranks")

    w = _partial_isometry(wd, p, e11_amb)
    report.add(
        "intertwine.isometry",
        max(
            amb.norm(amb.mul(amb.star(w), w) - e11_amb),
            amb.norm(amb.mul(w, amb.star(w)) - p),
        ),
        10 * tol.absolute,
    )

    u = np.zeros(amb.dim, dtype=np.complex128)
    for i in range(m):
        left = rho_matrix @ as_complex(units[(i, 0)])
        u += amb.mul(amb.mul(left, w), embed(units[(0, i)]))
    report.add(
        "intertwine.unitary",
        max(
            amb.norm(amb.mul(u, amb.star(u)) - amb.unit),
            amb.norm(amb.mul(amb.star(u), u) - amb.unit),
        ),
        10 * tol.absolute,
    )

    worst = 0.0
    ustar = amb.star(u)
    for e in units.values():
        lhs = rho_matrix @ as_complex(e)
        rhs = amb.mul(amb.mul(u, embed(e)), ustar)
        worst = max(worst, amb.norm(lhs - rhs))
    report.add("intertwine.conjugation", worst, 10 * tol.absolute)
    return u, report


def _partial_isometry(wd, p, q):
    """w with w*w = q and ww* = p, from matched range bases per block."""
    basis = np.stack(
        [
            wd.matrix_units[(k, i, j)]
            for k, dk in enumerate(wd.blocks)
            for i in range(dk)
            for j in range(dk)
        ],
        axis=1,
    )
    coords_p = np.linalg.lstsq(basis, as_complex(p), rcond=None)[0]
    coords_q = np.linalg.lstsq(basis, as_complex(q), rcond=None)[0]
    w = np.zeros(wd.alg.dim, dtype=np.complex128)
    pos = 0
    for k, dk in enumerate(wd.blocks):
        pk = coords_p[pos : pos + dk * dk].reshape(dk, dk)
        qk = coords_q[pos : pos + dk * dk].reshape(dk, dk)
        evals_p, vecs_p = np.linalg.eigh(0.5 * (pk + np.conjugate(pk.T)))
        evals_q, vecs_q = np.linalg.eigh(0.5 * (qk + np.conjugate(qk.T)))
        up = vecs_p[:, evals_p > 0.5]
        uq = vecs_q[:, evals_q > 0.5]
        wk = up @ np.conjugate(uq.T)
        for i in range(dk):
            for j in range(dk):
                w += wk[i, j] * wd.matrix_units[(k, i, j)]
        pos += dk * dk
    return w
