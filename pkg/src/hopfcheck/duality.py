"""Takesaki-type duality for the twice-iterated crossed product.

Iterating the crossed product once more yields CP2 = (A⋊K)⋊K', and CP2
is isomorphic to A⊗M_N through the family V_I = (1⋊τ)(W_I⋊1), indexed
by the quasi-basis labels. The isomorphism Ψ sends a matrix [a_IJ] over
A to Σ V_I*(a_IJ)V_J, and a single unitary U built from the canonical
implementing unitary conjugates the bidual coaction into ρ⊗id. Witness
data transports along both moves: by left multiplication under exterior
perturbations, and through Ψ and U under duality.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import StructureAlgebra, leg_mul, leg_norm, leg_star, leg_unit
from .coaction import CoactionMap, TwistedCoactionData, act_vec, amplify, exterior_transform, untwisted
from .crossed import CrossedProduct, dual_coaction, iterate_crossed, quasi_basis, v_unitary
from .errors import NotInImage
from .hopf import haar_pair
from .linalg import DEFAULT_TOL, Tolerance, as_complex
from .report import ResidualReport
from .rohlin import ApproxRepWitness, RohlinWitness, approx_rep_witness


@dataclass
class DualityData:
    cp: CrossedProduct
    cp2: CrossedProduct
    labels: list  # quasi-basis labels, the matrix index set
    V: dict  # label -> coefficient vector in cp2.alg
    P: dict  # label -> V_I* V_I
    U: np.ndarray  # two-leg array on (cp2.alg, K')
    rho2: CoactionMap = field(repr=False)
    tau2: np.ndarray = field(repr=False)  # Haar projection of K', the element 1⋊τ uses

    @property
    def size(self) -> int:
        return len(self.labels)


def build_duality(cp: CrossedProduct, tol: Tolerance = DEFAULT_TOL) -> DualityData:
    """V_I, P_I and the conjugating unitary U for the second iteration."""
    cp2 = iterate_crossed(cp, tol)
    qb = quasi_basis(cp)
    tau2 = haar_pair(cp.hopf).tau
    one_tau = cp2.embed_dual(tau2)

    V = {}
    P = {}
    for lbl in qb.labels:
        v = cp2.mul(one_tau, cp2.embed_base(qb.elements[lbl]))
        V[lbl] = v
        P[lbl] = cp2.mul(cp2.star(v), v)

    rho2 = dual_coaction(cp2)
    k2 = cp2.hopf
    legs2 = [cp2.alg, k2.alg]
    vt = np.einsum("cp,w->cwp", v_unitary(cp), k2.alg.unit).reshape(cp2.alg.dim, k2.N)
    u = np.zeros((cp2.alg.dim, k2.N), dtype=np.complex128)
    for lbl in qb.labels:
        left = np.einsum("c,w->cw", cp2.star(V[lbl]), k2.alg.unit)
        u += leg_mul(legs2, leg_mul(legs2, left, vt), rho2.rho_of(V[lbl]))
    return DualityData(cp, cp2, list(qb.labels), V, P, u, rho2, tau2)


def duality_report(dd: DualityData, tol: Tolerance = DEFAULT_TOL) -> ResidualReport:
    cp2 = dd.cp2
    k2 = cp2.hopf
    legs2 = [cp2.alg, k2.alg]
    report = ResidualReport()
    gate = 10 * tol.absolute

    one_tau = cp2.embed_dual(dd.tau2)
    worst = 0.0
    for i, li in enumerate(dd.labels):
        for j, lj in enumerate(dd.labels):
            prod = cp2.mul(dd.V[li], cp2.star(dd.V[lj]))
            target = one_tau if i == j else 0.0
            worst = max(worst, cp2.alg.norm(prod - target))
    report.add("duality.vv-orthogonality", worst, gate)

    total = sum(dd.P[lbl] for lbl in dd.labels)
    report.add("duality.projection-sum", cp2.alg.norm(total - cp2.alg.unit), gate)

    us = leg_star(legs2, dd.U)
    one2 = leg_unit(legs2)
    r_unitary = max(
        leg_norm(legs2, leg_mul(legs2, dd.U, us) - one2),
        leg_norm(legs2, leg_mul(legs2, us, dd.U) - one2),
    )
    report.add("duality.u-unitary", r_unitary, gate)

    vt = np.einsum("cp,w->cwp", v_unitary(dd.cp), k2.alg.unit).reshape(cp2.alg.dim, k2.N)
    worst_range = 0.0
    for lbl in dd.labels:
        left = np.einsum("c,w->cw", cp2.star(dd.V[lbl]), k2.alg.unit)
        ui = leg_mul(legs2, leg_mul(legs2, left, vt), dd.rho2.rho_of(dd.V[lbl]))
        uis = leg_star(legs2, ui)
        r_left = leg_norm(
            legs2,
            leg_mul(legs2, ui, uis) - np.einsum("c,w->cw", dd.P[lbl], k2.alg.unit),
        )
        r_right = leg_norm(legs2, leg_mul(legs2, uis, ui) - dd.rho2.rho_of(dd.P[lbl]))
        worst_range = max(worst_range, r_left, r_right)
    report.add("duality.ui-range", worst_range, gate)

    vts = leg_star(legs2, vt)
    tau_emb = np.einsum("c,w->cw", one_tau, k2.alg.unit)
    r_tau = leg_norm(
        legs2,
        dd.rho2.rho_of(one_tau) - leg_mul(legs2, leg_mul(legs2, vts, tau_emb), vt),
    )
    report.add("duality.tau-conjugation", r_tau, gate)
    return report


def psi(dd: DualityData, m) -> np.ndarray:
    """Ψ([a_IJ]) = Σ_IJ V_I*(a_IJ⋊1⋊1)V_J for m of shape (|Λ|, |Λ|, dim A)."""
    m = as_complex(m)
    L = dd.size
    cp2 = dd.cp2
    out = np.zeros(cp2.alg.dim, dtype=np.complex128)
    for i, li in enumerate(dd.labels):
        left = cp2.alg.lmul_matrix(cp2.star(dd.V[li]))
        for j, lj in enumerate(dd.labels):
            a_emb = cp2.embed_base(dd.cp.embed_base(m[i, j]))
            out += left @ cp2.mul(a_emb, dd.V[lj])
    return out


def psi_inv(dd: DualityData, z, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Matrix [a_IJ] with V_I z V_J* = a_IJ·(1⋊1⋊τ); NotInImage if extraction fails."""
    z = as_complex(z)
    L = dd.size
    cp = dd.cp
    cp2 = dd.cp2
    pattern = np.outer(cp.hopf.alg.unit, dd.tau2).reshape(-1)
    weight = float(np.real(np.conjugate(pattern) @ pattern))
    m = np.zeros((L, L, cp.base.dim), dtype=np.complex128)
    worst = 0.0
    for i, li in enumerate(dd.labels):
        left = cp2.alg.lmul_matrix(dd.V[li])
        for j, lj in enumerate(dd.labels):
            x = left @ cp2.mul(z, cp2.star(dd.V[lj]))
            x3 = x.reshape(cp.base.dim, -1)
            a = x3 @ np.conjugate(pattern) / weight
            worst = max(worst, np.abs(x3 - np.outer(a, pattern)).max())
            m[i, j] = a
    if worst > max(100 * tol.absolute, 1e-7):
        raise NotInImage(f"corner extraction leaves residual {worst:.3e}")
    return m


def verify_duality(dd: DualityData, tol: Tolerance = DEFAULT_TOL) -> ResidualReport:
    """Ψ is a unital *-isomorphism and U conjugates the bidual coaction.

    The two transport identities: Ad(U)∘ρ'' agrees with Ψ∘(ρ⊗id)∘Ψ⁻¹,
    and the twist u maps to the coboundary of U.
    """
    cp, cp2 = dd.cp, dd.cp2
    k2 = cp2.hopf
    legs2 = [cp2.alg, k2.alg]
    legs3 = [cp2.alg, k2.alg, k2.alg]
    L = dd.size
    da = cp.base.dim
    report = ResidualReport()
    gate = 10 * tol.absolute

    eyeL = np.eye(L)
    one_m = np.einsum("ij,k->ijk", eyeL, cp.base.unit)
    report.add("duality.psi-unital", cp2.alg.norm(psi(dd, one_m) - cp2.alg.unit), gate)

    rng = np.random.default_rng(0)
    r_mult = 0.0
    r_star = 0.0
    r_round = 0.0
    for _ in range(4):
        m1 = rng.standard_normal((L, L, da)) + 1j * rng.standard_normal((L, L, da))
        m2 = rng.standard_normal((L, L, da)) + 1j * rng.standard_normal((L, L, da))
        z1, z2 = psi(dd, m1), psi(dd, m2)
        prod = np.einsum("ika,kjb,abc->ijc", m1, m2, cp.base.mult, optimize=True)
        r_mult = max(r_mult, cp2.alg.norm(cp2.mul(z1, z2) - psi(dd, prod)))
        m1_star = np.einsum("ija,ba->jib", np.conjugate(m1), cp.base.star_matrix)
        r_star = max(r_star, cp2.alg.norm(cp2.star(z1) - psi(dd, m1_star)))
        r_round = max(r_round, np.abs(psi_inv(dd, z1, tol) - m1).max())
    report.add("duality.psi-multiplicative", r_mult, gate)
    report.add("duality.psi-star", r_star, gate)
    report.add("duality.psi-round-trip", r_round, gate)

    rho = cp.twisted.weak
    us = leg_star(legs2, dd.U)
    worst = 0.0
    eye2 = np.eye(cp2.alg.dim)
    for idx in range(cp2.alg.dim):
        z = eye2[idx]
        lhs = leg_mul(legs2, leg_mul(legs2, dd.U, dd.rho2.rho_of(z)), us)
        m = psi_inv(dd, z, tol)
        blocks = np.einsum("ija,abh->ijbh", m, rho.rho.reshape(da, rho.H.N, da).transpose(2, 0, 1))
        rhs = np.stack([psi(dd, blocks[:, :, :, h]) for h in range(rho.H.N)], axis=1)
        worst = max(worst, leg_norm(legs2, lhs - rhs))
    report.add("duality.conjugation-transport", worst, 10 * gate)

    u_in = cp.twisted.u
    lhs3 = np.stack(
        [
            np.stack([psi(dd, np.einsum("ij,a->ija", eyeL, u_in[:, p, r])) for r in range(k2.N)], axis=1)
            for p in range(k2.N)
        ],
        axis=1,
    )
    u_one = np.einsum("cp,r->cpr", dd.U, k2.alg.unit)
    rho2_u = np.stack([dd.rho2.rho_of(dd.U[:, r]) for r in range(k2.N)], axis=2)
    delta_us = np.einsum("cm,prm->cpr", us, k2.comult)
    rhs3 = leg_mul(legs3, leg_mul(legs3, u_one, rho2_u), delta_us)
    report.add("duality.cocycle-transport", leg_norm(legs3, lhs3 - rhs3), 10 * gate)
    return report


def transport_witness_exterior(wit: ApproxRepWitness, v,
                               target: TwistedCoactionData | None = None,
                               tol: Tolerance = DEFAULT_TOL) -> ApproxRepWitness:
    """Witness for the perturbed data Ad(v)∘ρ, by left multiplication."""
    c = wit.t.weak
    if target is None:
        target = exterior_transform(wit.t, v, tol)
    w2 = leg_mul([c.A, c.H.alg], as_complex(v), wit.w)
    return approx_rep_witness(target, w2, tol)


def transport_witness_dual(dd: DualityData, wit: ApproxRepWitness,
                           tol: Tolerance = DEFAULT_TOL) -> ApproxRepWitness:
    """Push a witness for (ρ, u) through Ψ and U to the bidual coaction.

    w first amplifies to w⊗I over the matrix index, transports through Ψ
    to a witness for the conjugated coaction Ad(U)∘ρ'', then U* peels the
    conjugation off.
    """
    L = dd.size
    eyeL = np.eye(L)
    n = dd.cp2.hopf.N
    w_sigma = np.stack(
        [psi(dd, np.einsum("ij,a->ija", eyeL, wit.w[:, h])) for h in range(n)],
        axis=1,
    )
    legs2 = [dd.cp2.alg, dd.cp2.hopf.alg]
    w2 = leg_mul(legs2, leg_star(legs2, dd.U), w_sigma)
    return approx_rep_witness(untwisted(dd.rho2), w2, tol)


def rohlin_dual_route(dd: DualityData, rw: RohlinWitness,
                      tol: Tolerance = DEFAULT_TOL) -> ResidualReport:
    """Transport q = Ψ(p⊗I) and compare its Haar average with the sum formula."""
    cp, cp2 = dd.cp, dd.cp2
    L = dd.size
    q = psi(dd, np.einsum("ij,a->ija", np.eye(L), rw.p))
    report = ResidualReport()
    gate = 10 * tol.absolute
    report.add(
        "duality.transported-projection",
        max(cp2.alg.norm(cp2.mul(q, q) - q), cp2.alg.norm(cp2.star(q) - q)),
        gate,
    )

    avg = act_vec(haar_pair(cp2.hopf).tau, q, dd.rho2)
    qb = quasi_basis(cp)
    p_emb = cp.embed_base(rw.p)
    total = np.zeros(cp.alg.dim, dtype=np.complex128)
    for lbl in qb.labels:
        w = qb.elements[lbl]
        total += cp.mul(cp.mul(cp.star(w), p_emb), w)
    rhs = cp2.embed_base(total / L)
    report.add("duality.transported-average", cp2.alg.norm(avg - rhs), gate)
    report.add(
        "rohlin.dual-haar-average",
        cp2.alg.norm(avg - cp2.alg.unit / L),
        gate,
    )
    return report


def amplify_witness(wit: ApproxRepWitness, n: int, tol: Tolerance = DEFAULT_TOL) -> ApproxRepWitness:
    """w⊗I_n witnesses the amplified coaction on A⊗M_n."""
    if n == 1:
        return wit
    t_amp = amplify(wit.t, n)
    mn_unit = np.eye(n).reshape(-1)
    w_amp = np.einsum("ih,w->iwh", wit.w, mn_unit).reshape(-1, wit.t.weak.H.N)
    return approx_rep_witness(t_amp, w_amp, tol)


def compress_witness(wit_amp: ApproxRepWitness, t: TwistedCoactionData, n: int,
                     tol: Tolerance = DEFAULT_TOL) -> ApproxRepWitness:
    """Corner of an amplified witness at the (0,0) matrix unit."""
    da = t.weak.A.dim
    w = wit_amp.w.reshape(da, n, n, t.weak.H.N)[:, 0, 0, :]
    return approx_rep_witness(t, w, tol)
