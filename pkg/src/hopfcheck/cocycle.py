"""Constructive vanishing of cocycles against a Rohlin projection.

Three correction routines share the same averaging idea: contract a
unitary against ρ(p) and the Haar functional to produce the element
that trivializes it.

* A 1-cocycle v (a coboundary candidate) is absorbed in two stages,
  first by the averaged unitary x₀, then by a polar correction of the
  remaining small cocycle.
* A 2-cocycle u is pushed toward 1 by a single closed-formula step, and
  iterating the step drives ‖u−1‖ down geometrically.
* The same average gives the near-commuting conjugator between two
  approximately equivalent coactions, with a computable commutator
  bound in terms of translated elements.

The closed formula for the 2-cocycle step needs only the projection,
the twist, and the coaction; the crossed product is built just to
score the quality of the would-be matrix units and to cross-check the
formula against its quasi-basis origin.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import StructureAlgebra, leg_mul, leg_norm, leg_star, leg_unit, tensor_algebra
from .coaction import CoactionMap, TwistedCoactionData, act_vec, exterior_transform
from .crossed import build_crossed, v_unitary
from .errors import GapTooLarge, NoConvergence, WitnessQualityTooLow
from .hopf import HopfAlgebra, comatrix_units, dual, haar_pair
from .linalg import DEFAULT_TOL, Tolerance, as_complex
from .report import ResidualReport
from .rohlin import RohlinWitness


@dataclass
class TrivializationResult:
    x: np.ndarray  # corrector: one leg for 1-cocycles, two legs (A, Q) for 2-cocycles
    residual_before: float
    residual_after: float
    iterations: int
    L: float
    report: ResidualReport = field(default_factory=ResidualReport, repr=False)
    history: list = field(default_factory=list, repr=False)


def _calculus(alg: StructureAlgebra, x, f):
    """Pull f applied to the representation of x back to coefficients."""
    mat = alg.rep_of(x)
    mat = 0.5 * (mat + np.conjugate(mat.T))
    evals, vecs = np.linalg.eigh(mat)
    out = (vecs * f(evals)) @ np.conjugate(vecs.T)
    basis = alg.gns().reshape(alg.dim, -1).T
    coeffs, *_ = np.linalg.lstsq(basis, out.reshape(-1), rcond=None)
    return coeffs, float(evals[0])


def unitary_part(alg: StructureAlgebra, y, floor: float = 1e-8):
    """Unitary factor y(y*y)^{-1/2}; None when y*y is nearly singular."""
    h = alg.mul(alg.star(y), y)
    inv_sqrt, low = _calculus(alg, h, lambda s: np.clip(s, floor, None) ** -0.5)
    if low < floor:
        return None
    return alg.mul(as_complex(y), inv_sqrt)


def seeded_unitary(alg: StructureAlgebra, rows, seed: int):
    """Deterministic unitary exp(ih) with h self-adjoint in the row span."""
    rows = np.atleast_2d(as_complex(rows))
    rng = np.random.default_rng(seed)
    coeff = rng.standard_normal(rows.shape[0]) + 1j * rng.standard_normal(rows.shape[0])
    h = rows.T @ coeff
    h = 0.5 * (h + alg.star(h))
    u, _ = _calculus(alg, h, lambda s: np.exp(1j * s))
    return u


def seeded_counital_unitary(a: StructureAlgebra, q: HopfAlgebra, rows, seed: int,
                            strength: float = 0.4):
    """Deterministic counital unitary in A⊗Q supported on the row scope.

    Not a cocycle in general; strength sets its distance from 1⊗1.
    """
    rows = np.atleast_2d(as_complex(rows))
    rng = np.random.default_rng(seed)
    legs2 = [a, q.alg]
    h = np.zeros((a.dim, q.N), dtype=np.complex128)
    m = rows.shape[0]
    for col in range(q.N):
        h[:, col] = rows.T @ (rng.standard_normal(m) + 1j * rng.standard_normal(m))
    h -= np.outer(h @ q.counit, q.alg.unit)
    h = 0.5 * (h + leg_star(legs2, h))
    aq = tensor_algebra(a, q.alg)
    g = unitary_part(aq, aq.unit + strength * 1j * h.reshape(-1))
    return g.reshape(a.dim, q.N)


def _conjugated_image(c: CoactionMap, v, a):
    """v ρ(a) v* as a two-leg array."""
    legs2 = [c.A, c.H.alg]
    return leg_mul(legs2, leg_mul(legs2, v, c.rho_of(a)), leg_star(legs2, v))


def _cocycle_defect(c: CoactionMap, v) -> float:
    """Residual of (v⊗1)(ρ⊗id)(v) = (id⊗Δ)(v)."""
    legs3 = [c.A, c.H.alg, c.H.alg]
    x1 = np.einsum("ch,r->chr", v, c.H.alg.unit)
    y2 = np.stack([c.rho_of(v[:, r]) for r in range(c.H.N)], axis=2)
    rhs = np.einsum("cm,hrm->chr", v, c.H.comult)
    return leg_norm(legs3, leg_mul(legs3, x1, y2) - rhs)


def one_cocycle_trivialize(rw: RohlinWitness, v, tol: Tolerance = DEFAULT_TOL) -> TrivializationResult:
    """Unitary x with vρ(a)v* = (x⊗1)ρ(x*ax)(x*⊗1), by two-stage averaging.

    Stage one averages vρ(p) against the Haar functional; stage two
    absorbs the leftover cocycle, which must be at distance < 1 from 1
    or GapTooLarge is raised. The cocycle identity for v is recorded as
    a precondition residual, not enforced.
    """
    c = rw.t.weak
    a = c.A
    q = c.H
    legs2 = [a, q.alg]
    v = as_complex(v)
    report = ResidualReport()
    gate = 10 * tol.absolute

    one2 = leg_unit(legs2)
    vs = leg_star(legs2, v)
    report.add(
        "cocycle.input-unitary",
        max(leg_norm(legs2, leg_mul(legs2, v, vs) - one2),
            leg_norm(legs2, leg_mul(legs2, vs, v) - one2)),
        gate,
    )
    report.add("cocycle.one-cocycle-precondition", _cocycle_defect(c, v), gate)

    eye = np.eye(a.dim)
    residual_before = max(
        leg_norm(legs2, _conjugated_image(c, v, eye[j]) - c.rho_of(eye[j]))
        for j in range(a.dim)
    )

    tau = haar_pair(q).tau
    x0 = q.N * (leg_mul(legs2, v, c.rho_of(rw.p)) @ tau)
    report.add(
        "cocycle.averaged-intertwiner",
        leg_norm(legs2, c.rho_of(x0) - leg_mul(legs2, vs, np.outer(x0, q.alg.unit))),
        gate,
    )
    corrected = unitary_part(a, x0)
    if corrected is None:
        raise GapTooLarge("averaged element is not invertible; v is too far from a coboundary")
    report.add("cocycle.stage1-unitary-defect", a.norm(corrected - x0), 1.0)
    x0 = corrected

    v1 = leg_mul(legs2, np.outer(x0, q.alg.unit), c.rho_of(a.star(x0)))
    gap = leg_norm(legs2, v - v1)
    report.add("cocycle.stage1-gap", gap, 1.0 - 1e-9)
    if gap >= 1.0 - 1e-9:
        raise GapTooLarge(f"‖v - (x₀⊗1)ρ(x₀*)‖ = {gap:.3f} ≥ 1")

    iterations = 1
    x = x0
    if gap > tol.absolute:
        v2 = leg_mul(legs2, v, leg_star(legs2, v1))
        x0s = a.star(x0)

        def rho1_of(z):
            inner = c.rho_of(a.mul(a.mul(x0s, z), x0))
            return leg_mul(
                legs2,
                leg_mul(legs2, np.outer(x0, q.alg.unit), inner),
                np.outer(x0s, q.alg.unit),
            )

        y = v2 @ tau
        report.add(
            "cocycle.stage2-intertwiner",
            leg_norm(legs2, rho1_of(y) - leg_mul(legs2, leg_star(legs2, v2), np.outer(y, q.alg.unit))),
            gate,
        )
        xc = unitary_part(a, y)
        if xc is None:
            raise GapTooLarge("stage-two average is not invertible")
        h_abs, _ = _calculus(a, a.mul(a.star(y), y), lambda s: np.clip(s, 0.0, None) ** 0.5)
        report.add(
            "cocycle.stage2-modulus-fixed",
            leg_norm(legs2, rho1_of(h_abs) - np.outer(h_abs, q.alg.unit)),
            gate,
        )
        x = a.mul(xc, x0)
        iterations = 2

    xs = a.star(x)
    residual_after = max(
        leg_norm(
            legs2,
            _conjugated_image(c, v, eye[j])
            - leg_mul(
                legs2,
                leg_mul(legs2, np.outer(x, q.alg.unit), c.rho_of(a.mul(a.mul(xs, eye[j]), x))),
                np.outer(xs, q.alg.unit),
            ),
        )
        for j in range(a.dim)
    )
    report.add("cocycle.trivialized", residual_after, max(gate, 1e-7))
    return TrivializationResult(x, residual_before, residual_after, iterations, 0.0, report)


def _u_hat(u, avec, bvec):
    """(id⊗a⊗b)(u) for functionals a, b given by dual coefficient vectors."""
    return np.einsum("apq,p,q->a", u, as_complex(avec), as_complex(bvec))


def _matrix_unit_quality(cp, p_emb, qb) -> float:
    """Worst matrix-unit defect of m_IJ = W_I*(p⋊1)W_J."""
    labels = qb.labels
    m = {}
    for li in labels:
        left = cp.mul(cp.star(qb.elements[li]), p_emb)
        for lj in labels:
            m[(li, lj)] = cp.mul(left, qb.elements[lj])
    worst = 0.0
    total = np.zeros(cp.alg.dim, dtype=np.complex128)
    for li in labels:
        total += m[(li, li)]
        for lj in labels:
            worst = max(worst, cp.alg.norm(cp.star(m[(li, lj)]) - m[(lj, li)]))
            for lk in labels:
                for ll in labels:
                    prod = cp.mul(m[(li, lj)], m[(lk, ll)])
                    expect = m[(li, ll)] if lj == lk else 0.0
                    worst = max(worst, cp.alg.norm(prod - expect))
    return max(worst, cp.alg.norm(total - cp.alg.unit))


def two_cocycle_trivialize_once(t: TwistedCoactionData, rw: RohlinWitness,
                                tol: Tolerance = DEFAULT_TOL,
                                quality_gate: float = 1e-6) -> TrivializationResult:
    """One closed-formula correction step for the twist of (ρ, u).

    Returns x ∈ A⊗Q with (x⊗1)[(ρ⊗id)(x)]u[(id⊗Δ)(x*)] = 1 up to the
    recorded residual. The Rohlin projection may come from any exterior
    perturbation of the same data; only rw.p is used. Raises
    WitnessQualityTooLow when W_I*(p⋊1)W_J fail to be matrix units.
    """
    c = t.weak
    a = c.A
    q = c.H
    k_hopf = dual(q)
    legs2 = [a, q.alg]
    legs3 = t.legs3
    report = ResidualReport()
    gate = 10 * tol.absolute

    residual_before = leg_norm(legs3, t.u - leg_unit(legs3))

    cp = build_crossed(t, tol)
    p_emb = cp.embed_base(rw.p)
    from .crossed import quasi_basis

    qb = quasi_basis(cp)
    quality = _matrix_unit_quality(cp, p_emb, qb)
    report.add("cocycle.matrix-unit-quality", quality, quality_gate)
    if quality > quality_gate:
        raise WitnessQualityTooLow(
            f"W_I*(p⋊1)W_J deviate from matrix units by {quality:.3e}"
        )

    cu = comatrix_units(k_hopf)
    ustar3 = leg_star(legs3, t.u)
    kalg = k_hopf.alg
    x_arr = np.zeros((a.dim, q.N), dtype=np.complex128)
    for k, dk in enumerate(cu.block_dims):
        wv = {(i, j): cu.vectors[(k, i, j)] for i in range(dk) for j in range(dk)}
        s1 = np.zeros((dk, dk, a.dim), dtype=np.complex128)
        tm = np.zeros((dk, dk, a.dim), dtype=np.complex128)
        for j2 in range(dk):
            for i in range(dk):
                acc = np.zeros(a.dim, dtype=np.complex128)
                for j1 in range(dk):
                    acc += _u_hat(ustar3, kalg.star(wv[(j1, j2)]), wv[(j1, i)])
                s1[j2, i] = acc
            for j3 in range(dk):
                tm[j2, j3] = act_vec(kalg.star(wv[(j2, j3)]), rw.p, c)
        for m in range(q.N):
            em = np.zeros(q.N)
            em[m] = 1.0
            for i in range(dk):
                for j3 in range(dk):
                    s2 = np.zeros(a.dim, dtype=np.complex128)
                    for j4 in range(dk):
                        s2 += _u_hat(t.u, kalg.star(wv[(j3, j4)]), kalg.mul(wv[(i, j4)], em))
                    for j2 in range(dk):
                        x_arr[:, m] += dk * a.mul(a.mul(s1[j2, i], tm[j2, j3]), s2)

    xs = leg_star(legs2, x_arr)
    one2 = leg_unit(legs2)
    report.add(
        "cocycle.corrector-unitary",
        max(leg_norm(legs2, leg_mul(legs2, x_arr, xs) - one2),
            leg_norm(legs2, leg_mul(legs2, xs, x_arr) - one2)),
        gate,
    )
    report.add(
        "cocycle.corrector-counital",
        a.norm(x_arr @ q.counit - a.unit),
        gate,
    )

    theta = np.zeros((cp.alg.dim, q.N), dtype=np.complex128)
    for m in range(q.N):
        em = np.zeros(q.N)
        em[m] = 1.0
        acc = np.zeros(cp.alg.dim, dtype=np.complex128)
        for k, dk in enumerate(cu.block_dims):
            for i in range(dk):
                for j in range(dk):
                    wij = cu.vectors[(k, i, j)]
                    lead = cp.mul(cp.star(cp.embed_dual(wij)), p_emb)
                    acc += dk * cp.mul(lead, cp.embed_dual(kalg.mul(wij, em)))
        theta[:, m] = acc
    worst_theta = 0.0
    km = kalg.mult
    for m in range(q.N):
        for g in range(q.N):
            lhs = cp.mul(theta[:, m], theta[:, g])
            rhs = theta @ km[m, g]
            worst_theta = max(worst_theta, cp.alg.norm(lhs - rhs))
    report.add("cocycle.theta-multiplicative", worst_theta, gate)

    legs_cp = [cp.alg, q.alg]
    v_can = v_unitary(cp)
    x_cp = leg_mul(legs_cp, theta, leg_star(legs_cp, v_can))
    cross = max(
        cp.alg.norm(x_cp[:, m] - cp.embed_base(x_arr[:, m])) for m in range(q.N)
    )
    report.add("cocycle.quasi-basis-crosscheck", cross, gate)

    y1 = np.einsum("cp,r->cpr", x_arr, q.alg.unit)
    y2 = np.stack([c.rho_of(x_arr[:, r]) for r in range(q.N)], axis=2)
    y3 = np.einsum("cm,prm->cpr", xs, q.comult)
    prod = leg_mul(legs3, leg_mul(legs3, leg_mul(legs3, y1, y2), t.u), y3)
    residual_after = leg_norm(legs3, prod - leg_unit(legs3))
    report.add("cocycle.trivialized", residual_after, max(gate, 1e-7))

    return TrivializationResult(
        x_arr, residual_before, residual_after, 1, compute_L(k_hopf, "chain"), report
    )


def two_cocycle_trivialize_iterative(t: TwistedCoactionData, rw: RohlinWitness,
                                     max_iter: int = 12,
                                     stop: float = 1e-9,
                                     tol: Tolerance = DEFAULT_TOL) -> TrivializationResult:
    """Iterate the one-step correction until ‖u−1‖ falls below stop.

    The Rohlin projection is reused across iterations; exterior
    perturbations do not move it. Raises NoConvergence when max_iter
    steps leave the twist away from 1.
    """
    c = t.weak
    legs2 = [c.A, c.H.alg]
    legs3 = t.legs3
    report = ResidualReport()
    x_total = leg_unit(legs2)
    current = t
    history = [leg_norm(legs3, current.u - leg_unit(legs3))]
    residual_before = history[0]
    big_l = 0.0
    iterations = 0
    for it in range(max_iter):
        if history[-1] <= stop:
            break
        step = two_cocycle_trivialize_once(current, rw, tol)
        big_l = step.L
        x_total = leg_mul(legs2, step.x, x_total)
        current = exterior_transform(current, step.x, tol)
        history.append(leg_norm(legs3, current.u - leg_unit(legs3)))
        iterations += 1
        report.add(f"cocycle.iterate-{iterations}", history[-1], max(stop, history[-2]))
    residual_after = history[-1]
    if residual_after > stop:
        raise NoConvergence(
            f"‖u-1‖ = {residual_after:.3e} after {iterations} steps (target {stop:.1e})"
        )
    report.add("cocycle.final", residual_after, stop)
    result = TrivializationResult(
        x_total, residual_before, residual_after, iterations, big_l, report
    )
    result.history = history
    return result


def compute_L(h: HopfAlgebra, variant: str = "sum") -> float:
    """Stability constants from comatrix-unit norms.

    "sum" is Σ d_k·‖w_ij^k‖, the Lipschitz factor of the commutator
    bound. "chain" sums ‖w_ij^k‖·‖w_{j₁j}^k w_{t₂t₁}^r S(w_{t₁t}^r)*‖
    over all chain indices and never returns less than 1; it controls
    the once-step error propagation.
    """
    cu = comatrix_units(h)
    alg = h.alg
    if variant == "sum":
        return float(
            sum(
                dk * alg.norm(cu.vectors[(k, i, j)])
                for k, dk in enumerate(cu.block_dims)
                for i in range(dk)
                for j in range(dk)
            )
        )
    if variant != "chain":
        raise ValueError(f"unknown variant {variant!r}")
    total = 0.0
    for k, dk in enumerate(cu.block_dims):
        for i in range(dk):
            for j in range(dk):
                lead = alg.norm(cu.vectors[(k, i, j)])
                for j1 in range(dk):
                    wa = cu.vectors[(k, j1, j)]
                    for r, dr in enumerate(cu.block_dims):
                        for t in range(dr):
                            for t1 in range(dr):
                                tail = alg.star(h.antipode @ cu.vectors[(r, t1, t)])
                                for t2 in range(dr):
                                    mid = alg.mul(wa, cu.vectors[(r, t2, t1)])
                                    total += dk * lead * alg.norm(alg.mul(mid, tail))
    return float(max(total, 1.0))


def aue_one_step(rho: CoactionMap, rw: RohlinWitness, sigma: CoactionMap, v,
                 fset, tol: Tolerance = DEFAULT_TOL):
    """Averaged conjugator between approximately equivalent coactions.

    v is a unitary with σ ≈ Ad(v)∘ρ; it is counitally normalized first.
    Returns (x, report) where x = N(id⊗e)(vρ(p)). The report scores, per
    element of fset, both the conjugation estimate and the commutator
    ‖xa－ax‖ against ε + L·(worst translated deviation of that element);
    violations show up as failing entries, never as exceptions.
    """
    a = rho.A
    q = rho.H
    legs2 = [a, q.alg]
    k_hopf = dual(q)
    report = ResidualReport()
    gate = 10 * tol.absolute
    # The commutator estimate moves each element of fset through the
    # witness projection, so the guarantee only covers elements inside
    # the witness scope (for tower witnesses: the embedded lower level).
    # Elements outside it still get measured, they just may fail.

    v = as_complex(v)
    z = v @ q.counit
    report.add(
        "aue.normalizer-unitary",
        max(a.norm(a.mul(z, a.star(z)) - a.unit), a.norm(a.mul(a.star(z), z) - a.unit)),
        gate,
    )
    v = leg_mul(legs2, v, np.outer(a.star(z), q.alg.unit))

    cu = comatrix_units(k_hopf)
    translates_r = []
    translates_s = []
    fset = [as_complex(f) for f in fset]
    for f in fset:
        row_r = []
        for key in cu.labels:
            sw = k_hopf.antipode @ cu.vectors[key]
            row_r.append(act_vec(sw, f, rho))
            translates_s.append(act_vec(sw, f, sigma))
        translates_r.append(row_r)

    def deviation(elem):
        return leg_norm(legs2, sigma.rho_of(elem) - _conjugated_image(rho, v, elem))

    eps = 0.0
    for f in fset:
        eps = max(eps, deviation(f))
    for row in translates_r:
        for b in row:
            eps = max(eps, deviation(b))
    for b in translates_s:
        eps = max(eps, deviation(b))
    report.add("aue.epsilon", eps, np.inf)

    tau = haar_pair(q).tau
    x = q.N * (leg_mul(legs2, v, rho.rho_of(rw.p)) @ tau)
    xs = a.star(x)
    report.add(
        "aue.averaged-unitary",
        max(a.norm(a.mul(x, xs) - a.unit), a.norm(a.mul(xs, x) - a.unit)),
        gate,
    )

    big_l = compute_L(k_hopf, "sum")
    slack = 10 * tol.absolute
    for idx, f in enumerate(fset):
        worst_translate = max(
            leg_norm(legs2, sigma.rho_of(b) - rho.rho_of(b)) for b in translates_r[idx]
        )
        bound = eps + big_l * worst_translate + slack
        conj = leg_mul(
            legs2,
            leg_mul(legs2, np.outer(x, q.alg.unit), rho.rho_of(a.mul(a.mul(xs, f), x))),
            np.outer(xs, q.alg.unit),
        )
        d_conj = leg_norm(legs2, sigma.rho_of(f) - conj)
        report.add(f"aue.conjugation-{idx}", d_conj, bound)

        d_comm = a.norm(a.mul(x, f) - a.mul(f, x))
        report.add(f"aue.commutator-{idx}", d_comm, bound)
    return x, report
