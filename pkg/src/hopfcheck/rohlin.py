"""Rohlin projections and approximate-representability witnesses.

A Rohlin witness is a projection p in the coacted algebra that averages
to 1/N under the Haar functional and commutes with a designated
subalgebra. An approximate-representability witness is a unitary
w ∈ A⊗H implementing the coaction as conjugation by w, with the twist u
recovered from w in the two standard cocycle forms. The quasi-basis
formula ŵ(φ) = Σ_I (φ·W_I)(p⋊1)W_I* converts one into the other on the
dual side, and the group bridges translate both notions into partitions
of unity and unitary representations when the coacting algebra is C(G).

All residuals here are operator norms in the regular representation,
not coefficient maxima, since the finite-level estimates they feed are
stated in the C*-norm.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import leg_mul, leg_norm, leg_star, leg_unit
from .coaction import CoactionMap, TwistedCoactionData, act_vec, check_saturated, untwisted
from .crossed import CrossedProduct, build_crossed, dual_coaction, quasi_basis
from .errors import CovarianceFailure, NotPartition, NotSaturated
from .hopf import dual, haar_pair
from .linalg import DEFAULT_TOL, Tolerance, as_complex
from .report import ResidualReport


@dataclass
class ApproxRepWitness:
    t: TwistedCoactionData
    w: np.ndarray  # two-leg array on (A, H)
    residuals: tuple  # (conjugation, product cocycle, coaction cocycle)
    report: ResidualReport | None = field(default=None, repr=False)


@dataclass
class RohlinWitness:
    t: TwistedCoactionData
    p: np.ndarray  # coefficient vector in A
    commutant_scope: np.ndarray  # rows span the subalgebra p must commute with
    residuals: dict = field(default_factory=dict)


def check_approx_rep(wit: ApproxRepWitness, tol: Tolerance = DEFAULT_TOL,
                     domain=None) -> ResidualReport:
    """Unitarity plus the three witness identities.

    (1) ρ(a) = w(a⊗1)w* on every basis element,
    (2) u = (w⊗1)[(triv⊗id)(w)][(id⊗Δ)(w*)],
    (3) u = [(ρ⊗id)(w)](w⊗1)[(id⊗Δ)(w*)].

    ``domain`` rows, when given, replace the basis in (1). A witness built
    from a projection only implements the coaction on the subalgebra the
    projection commutes with, so callers in that situation pass the scope.
    """
    t, w = wit.t, wit.w
    c = t.weak
    legs2 = [c.A, c.H.alg]
    legs3 = t.legs3
    ws = leg_star(legs2, w)
    report = ResidualReport()

    one2 = leg_unit(legs2)
    r_unit = max(
        leg_norm(legs2, leg_mul(legs2, w, ws) - one2),
        leg_norm(legs2, leg_mul(legs2, ws, w) - one2),
    )
    report.add("approx-rep.unitary", r_unit, 10 * tol.absolute)

    rows = np.eye(c.A.dim) if domain is None else np.atleast_2d(as_complex(domain))
    r1 = 0.0
    for row in rows:
        a_emb = np.outer(row, c.H.alg.unit)
        conj = leg_mul(legs2, leg_mul(legs2, w, a_emb), ws)
        r1 = max(r1, leg_norm(legs2, c.rho_of(row) - conj))
    report.add("approx-rep.conjugation", r1, 10 * tol.absolute)

    unit_h = c.H.alg.unit
    w_one = np.einsum("ch,r->chr", w, unit_h)
    triv_w = np.einsum("cr,h->chr", w, unit_h)
    delta_ws = np.einsum("cm,hrm->chr", ws, c.H.comult)
    r2 = leg_norm(legs3, t.u - leg_mul(legs3, leg_mul(legs3, w_one, triv_w), delta_ws))
    report.add("approx-rep.product-cocycle", r2, 10 * tol.absolute)

    rho_w = np.stack([c.rho_of(w[:, h]) for h in range(c.H.N)], axis=2)
    r3 = leg_norm(legs3, t.u - leg_mul(legs3, leg_mul(legs3, rho_w, w_one), delta_ws))
    report.add("approx-rep.coaction-cocycle", r3, 10 * tol.absolute)

    wit.residuals = (r1, r2, r3)
    wit.report = report
    return report


def approx_rep_witness(t: TwistedCoactionData, w, tol: Tolerance = DEFAULT_TOL,
                       domain=None) -> ApproxRepWitness:
    wit = ApproxRepWitness(t, as_complex(w), ())
    check_approx_rep(wit, tol, domain=domain)
    return wit


def check_rohlin_projection(rw: RohlinWitness, tol: Tolerance = DEFAULT_TOL) -> ResidualReport:
    """Projection axioms, the Haar average e·p = 1/N, and scope commutators."""
    c = rw.t.weak
    a = c.A
    p = rw.p
    report = ResidualReport()
    report.add("rohlin.self-adjoint", a.norm(a.star(p) - p), tol.absolute)
    report.add("rohlin.idempotent", a.norm(a.mul(p, p) - p), tol.absolute)

    e = haar_pair(c.H).tau
    avg = act_vec(e, p, c)
    report.add("rohlin.haar-average", a.norm(avg - a.unit / c.H.N), tol.absolute)

    worst = 0.0
    for row in np.atleast_2d(as_complex(rw.commutant_scope)):
        worst = max(worst, a.norm(a.mul(p, row) - a.mul(row, p)))
    report.add("rohlin.commutant", worst, tol.absolute)
    rw.residuals = {entry.name: entry.residual for entry in report.entries}
    return report


def rohlin_witness(t: TwistedCoactionData, p, scope=None, tol: Tolerance = DEFAULT_TOL) -> RohlinWitness:
    if scope is None:
        scope = t.weak.A.unit[None, :]
    rw = RohlinWitness(t, as_complex(p), as_complex(scope))
    check_rohlin_projection(rw, tol)
    return rw


def check_sum_condition(rw: RohlinWitness, cp: CrossedProduct | None = None,
                        tol: Tolerance = DEFAULT_TOL) -> ResidualReport:
    """Σ_I W_I*(p⋊1)W_I = 1 over the quasi-basis of the crossed product."""
    if cp is None:
        cp = build_crossed(rw.t)
    qb = quasi_basis(cp)
    p_emb = cp.embed_base(rw.p)
    total = np.zeros(cp.alg.dim, dtype=np.complex128)
    for lbl in qb.labels:
        w = qb.elements[lbl]
        total += cp.mul(cp.mul(cp.star(w), p_emb), w)
    report = ResidualReport()
    report.add("rohlin.sum-condition", cp.alg.norm(total - cp.alg.unit), 10 * tol.absolute)
    return report


def _covariance_defect(cp: CrossedProduct, p_emb, scope) -> float:
    """Worst norm of (p⋊1)x(p⋊1) - E₁(x)(p⋊1) over x = a⋊φ with a in the scope.

    The identity needs p to commute with the base coefficient of x, so it
    only quantifies over the subalgebra the witness declares; both sides are
    linear in x, so spanning rows suffice.
    """
    worst = 0.0
    eye_k = np.eye(cp.hopf.N)
    for row in np.atleast_2d(as_complex(scope)):
        for m in range(cp.hopf.N):
            x = np.outer(row, eye_k[m]).reshape(-1)
            lhs = cp.mul(cp.mul(p_emb, x), p_emb)
            rhs = cp.mul(cp.embed_base(cp.e1(x)), p_emb)
            worst = max(worst, cp.alg.norm(lhs - rhs))
    return worst


def witness_from_projection(rw: RohlinWitness, cp: CrossedProduct | None = None,
                            tol: Tolerance = DEFAULT_TOL) -> ApproxRepWitness:
    """Dual-side witness ŵ(φ) = Σ_I (φ·W_I)(p⋊1)W_I* from a Rohlin projection.

    The result witnesses the dual coaction on the crossed product. Raises
    NotSaturated when the crossed product is not spanned by A(1⋊e)A, and
    CovarianceFailure when p does not compress down to the canonical
    expectation, which is the actual content of the Rohlin condition.
    """
    t = rw.t
    if cp is None:
        cp = build_crossed(t)
    if not check_saturated(t.weak, cp, tol):
        raise NotSaturated("crossed product is not saturated; quasi-basis formula unavailable")

    p_emb = cp.embed_base(rw.p)
    covariance = _covariance_defect(cp, p_emb, rw.commutant_scope)
    gate = max(100 * tol.absolute, 1e-6)
    if covariance > gate:
        raise CovarianceFailure(
            f"(p⋊1)x(p⋊1) deviates from E₁(x)(p⋊1) by {covariance:.3e}"
        )

    rh = dual_coaction(cp)
    qb = quasi_basis(cp)
    n = cp.hopf.N
    w = np.zeros((cp.alg.dim, n), dtype=np.complex128)
    for lbl in qb.labels:
        wi = qb.elements[lbl]
        acted = rh.rho_of(wi)
        right = cp.mul(p_emb, cp.star(wi))
        for m in range(n):
            w[:, m] += cp.mul(acted[:, m], right)

    scope_rows = np.atleast_2d(as_complex(rw.commutant_scope))
    eye_k = np.eye(cp.hopf.N)
    domain = np.stack([
        np.outer(row, eye_k[m]).reshape(-1)
        for row in scope_rows for m in range(cp.hopf.N)
    ])
    wit = approx_rep_witness(untwisted(rh), w, tol, domain=domain)
    one_dual = dual(cp.hopf).alg.unit
    wit.report.add("witness.unit", cp.alg.norm(w @ one_dual - cp.alg.unit), 10 * tol.absolute)
    wit.report.add("witness.covariance", covariance, gate)

    base_comm = 0.0
    for row in np.atleast_2d(as_complex(rw.commutant_scope)):
        a_emb = cp.embed_base(row)
        for m in range(n):
            col = w[:, m]
            base_comm = max(base_comm, cp.alg.norm(cp.mul(col, a_emb) - cp.mul(a_emb, col)))
    wit.report.add("witness.base-commutant", base_comm, 10 * tol.absolute)
    return wit


def projection_from_witness(wit: ApproxRepWitness, cp: CrossedProduct,
                            scope=None, tol: Tolerance = DEFAULT_TOL) -> RohlinWitness:
    """Recover the Rohlin projection p from a dual-side witness as ŵ(τ).

    ŵ(τ) lands in the embedded base whenever the witness came from the
    quasi-basis formula; the extraction residual is recorded so that
    witnesses of a different origin fail visibly rather than silently.
    """
    tau = haar_pair(cp.hopf).tau
    p_cp = wit.w @ tau
    mat = p_cp.reshape(cp.base.dim, cp.hopf.N)
    unit_k = cp.hopf.alg.unit
    p = mat @ np.conjugate(unit_k) / np.real(np.conjugate(unit_k) @ unit_k)
    embed_res = cp.alg.norm(p_cp - cp.embed_base(p))
    rw = rohlin_witness(cp.twisted, p, scope, tol)
    rw.residuals["rohlin.base-component"] = float(embed_res)
    return rw


# ---------------------------------------------------------------------------
# group translations: partitions of unity and unitary representations


def _identity_index(table) -> int:
    table = np.asarray(table)
    n = table.shape[0]
    for t in range(n):
        if np.array_equal(table[t], np.arange(n)) and np.array_equal(table[:, t], np.arange(n)):
            return t
    raise NotPartition("multiplication table has no identity element")


def group_action_from_coaction(c: CoactionMap) -> list[np.ndarray]:
    """Automorphism matrices α_t = (id⊗ev_t)∘ρ for a coaction of C(G)."""
    r = c.rho_basis()
    return [r[:, :, t].T.copy() for t in range(c.H.N)]


def partition_from_rohlin(rw: RohlinWitness, mats, table,
                          tol: Tolerance = DEFAULT_TOL) -> dict[int, np.ndarray]:
    """Translate a Rohlin projection into the partition e_t = α_t(p)."""
    parts = {t: as_complex(mats[t]) @ rw.p for t in range(len(mats))}
    _check_partition(rw.t.weak.A, parts, mats, table, tol)
    return parts


def rohlin_from_partition(c: CoactionMap, mats, table, parts,
                          scope=None, tol: Tolerance = DEFAULT_TOL) -> RohlinWitness:
    """Inverse translation: p is the member of the partition at the identity."""
    _check_partition(c.A, parts, mats, table, tol)
    p = parts[_identity_index(table)]
    return rohlin_witness(untwisted(c), p, scope, tol)


def _check_partition(a, parts, mats, table, tol: Tolerance) -> None:
    gate = max(10 * tol.absolute, 1e-8)
    n = len(parts)
    total = np.zeros(a.dim, dtype=np.complex128)
    for t in range(n):
        e = as_complex(parts[t])
        if a.norm(a.mul(e, e) - e) > gate or a.norm(a.star(e) - e) > gate:
            raise NotPartition(f"member {t} is not a projection")
        total += e
    if a.norm(total - a.unit) > gate:
        raise NotPartition("members do not sum to 1")
    for t in range(n):
        for s in range(n):
            if t == s:
                continue
            if a.norm(a.mul(parts[t], parts[s])) > gate:
                raise NotPartition(f"members {t} and {s} are not orthogonal")
    table = np.asarray(table)
    for t in range(n):
        for s in range(n):
            moved = as_complex(mats[t]) @ parts[s]
            if a.norm(moved - parts[table[t, s]]) > gate:
                raise NotPartition("partition is not translated by the action")


def witness_from_unitary_rep(c: CoactionMap, mats, table, us,
                             tol: Tolerance = DEFAULT_TOL) -> ApproxRepWitness:
    """Witness w = Σ_t u(t)⊗δ_t from a unitary representation in A.

    The u(t) must implement the action by conjugation and be permuted by
    it, α_t(u(s)) = u(tst⁻¹); both conditions are recorded alongside the
    intrinsic witness identities.
    """
    a = c.A
    table = np.asarray(table)
    n = table.shape[0]
    w = np.stack([as_complex(us[t]) for t in range(n)], axis=1)
    wit = approx_rep_witness(untwisted(c), w, tol)

    ident = _identity_index(table)
    inv = [int(np.where(table[t] == ident)[0][0]) for t in range(n)]
    r_unitary = 0.0
    r_action = 0.0
    r_cov = 0.0
    eye = np.eye(a.dim)
    for t in range(n):
        u = w[:, t]
        us_t = a.star(u)
        r_unitary = max(r_unitary, a.norm(a.mul(u, us_t) - a.unit),
                        a.norm(a.mul(us_t, u) - a.unit))
        for j in range(a.dim):
            moved = as_complex(mats[t]) @ eye[j]
            r_action = max(r_action, a.norm(moved - a.mul(a.mul(u, eye[j]), us_t)))
        for s in range(n):
            conj = int(table[table[t, s], inv[t]])
            r_cov = max(r_cov, a.norm(as_complex(mats[t]) @ w[:, s] - w[:, conj]))
    wit.report.add("group.rep-unitary", r_unitary, 10 * tol.absolute)
    wit.report.add("group.implements-action", r_action, 10 * tol.absolute)
    wit.report.add("group.covariant-family", r_cov, 10 * tol.absolute)
    return wit


def unitary_rep_from_witness(wit: ApproxRepWitness) -> dict[int, np.ndarray]:
    """Columns of the witness array, u(t) = (id⊗ev_t)(w)."""
    return {t: wit.w[:, t].copy() for t in range(wit.w.shape[1])}
