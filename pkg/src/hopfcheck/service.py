"""One place for the operations behind the CLI and the HTTP service.

Each handler takes a parsed algebra plus scalar options and returns
(payload, report): a JSON-ready result dict and the ResidualReport that
decides pass or fail. Handlers are deterministic for a fixed seed; the
randomized constructions (cocycle correctors, equivalence trials) draw
everything from numpy generators seeded by the caller.
"""

from __future__ import annotations

import numpy as np

from .algebra import leg_mul, validate_algebra, wedderburn
from .coaction import conjugate_coaction, exterior_transform, untwisted
from .cocycle import (
    aue_one_step,
    one_cocycle_trivialize,
    seeded_counital_unitary,
    seeded_unitary,
    two_cocycle_trivialize_iterative,
    two_cocycle_trivialize_once,
)
from .crossed import build_crossed, crossed_report
from .descriptors import _pairs, descriptor_of
from .duality import build_duality, duality_report, verify_duality
from .errors import WrongKind
from .hopf import (
    HopfAlgebra,
    appendix_span_check,
    comatrix_report,
    comatrix_units,
    dual,
    haar_pair,
    haar_report,
    validate_hopf,
)
from .linalg import DEFAULT_TOL, Tolerance
from .report import ResidualReport
from .rohlin import (
    check_sum_condition,
    projection_from_witness,
    rohlin_witness,
    witness_from_projection,
)
from .tower import build_base, build_tower, rohlin_report


def _need_hopf(obj, op: str) -> HopfAlgebra:
    if not isinstance(obj, HopfAlgebra):
        raise WrongKind(f"{op} needs a Hopf algebra input, got a bare *-algebra")
    return obj


def _describe(obj) -> dict:
    if isinstance(obj, HopfAlgebra):
        return {"kind": "hopf", "label": obj.label, "dimension": obj.N}
    return {"kind": "algebra", "label": obj.label, "dimension": obj.dim}


def run_validate(obj, tol: Tolerance = DEFAULT_TOL):
    if isinstance(obj, HopfAlgebra):
        report = validate_hopf(obj, tol)
    else:
        report = validate_algebra(obj, tol)
    return _describe(obj), report


def run_dual(obj, tol: Tolerance = DEFAULT_TOL):
    h = _need_hopf(obj, "dual")
    d = dual(h)
    report = validate_hopf(d, tol)
    dd = dual(d)
    back = max(
        np.abs(dd.alg.mult - h.alg.mult).max(),
        np.abs(dd.alg.star_matrix - h.alg.star_matrix).max(),
        np.abs(dd.comult - h.comult).max(),
        np.abs(dd.counit - h.counit).max(),
        np.abs(dd.antipode - h.antipode).max(),
    )
    report.add("dual.double-dual", back, 10 * tol.absolute)
    return {"algebra": descriptor_of(d)}, report


def run_haar(obj, tol: Tolerance = DEFAULT_TOL):
    h = _need_hopf(obj, "haar")
    hp = haar_pair(h)
    report = haar_report(h, tol)
    return {"e": _pairs(hp.e), "tau": _pairs(hp.tau)}, report


def run_comatrix(obj, tol: Tolerance = DEFAULT_TOL):
    h = _need_hopf(obj, "comatrix")
    cu = comatrix_units(h)
    report = comatrix_report(h, cu, tol)
    units = [
        {"block": k, "row": i, "col": j, "coeffs": _pairs(cu.vectors[(k, i, j)])}
        for (k, i, j) in cu.labels
    ]
    return {"block_dims": list(cu.block_dims), "units": units}, report


def run_crossed(obj, tol: Tolerance = DEFAULT_TOL):
    h = _need_hopf(obj, "crossed")
    cp = build_base(h, tol)
    report = crossed_report(cp, tol)
    wd = wedderburn(cp.alg)
    blocks = sorted(wd.blocks)
    report.add("crossed.full-matrix-block", 0.0 if blocks == [h.N] else 1.0, 0.5)
    return {"dimension": cp.alg.dim, "blocks": blocks}, report


def run_duality(obj, tol: Tolerance = DEFAULT_TOL):
    h = _need_hopf(obj, "duality-check")
    cp = build_base(h, tol)
    dd = build_duality(cp, tol)
    report = duality_report(dd, tol)
    report.extend(verify_duality(dd, tol))
    return {"dimension": cp.alg.dim, "double_dimension": dd.cp2.alg.dim}, report


def run_tower(obj, level: int = 2, tol: Tolerance = DEFAULT_TOL):
    h = _need_hopf(obj, "tower")
    levels = build_tower(h, max(1, level), tol)
    report = ResidualReport()
    payload = []
    for lv in levels:
        _, _, rep = rohlin_report(lv, tol)
        report.extend(rep, prefix=f"level{lv.n}.")
        payload.append({"level": lv.n, "dimension": lv.algebra.dim})
    return {"levels": payload}, report


def run_rohlin(obj, level: int = 1, tol: Tolerance = DEFAULT_TOL):
    h = _need_hopf(obj, "rohlin-check")
    levels = build_tower(h, max(1, level), tol)
    report = ResidualReport()
    payload = []
    for lv in levels:
        prefix = f"level{lv.n}."
        rw, _, rep = rohlin_report(lv, tol)
        report.extend(rep, prefix=prefix)
        cp = build_crossed(rw.t, tol)
        wit = witness_from_projection(rw, cp, tol)
        report.extend(wit.report, prefix=prefix)
        report.extend(check_sum_condition(rw, cp, tol), prefix=prefix)
        rw_back = projection_from_witness(wit, cp, scope=lv.inclusion.T, tol=tol)
        report.add(
            prefix + "rohlin.round-trip",
            lv.algebra.norm(rw_back.p - rw.p),
            10 * tol.absolute,
        )
        payload.append({"level": lv.n, "dimension": lv.algebra.dim})
    return {"levels": payload}, report


def _level_two(h: HopfAlgebra, tol: Tolerance):
    levels = build_tower(h, 2, tol)
    lv = levels[1]
    rw = rohlin_witness(untwisted(lv.rho), lv.p, scope=lv.inclusion.T, tol=tol)
    return lv, rw


def run_trivialize1(obj, seed: int = 0, tol: Tolerance = DEFAULT_TOL):
    h = _need_hopf(obj, "trivialize-1")
    lv, rw = _level_two(h, tol)
    a, q = lv.algebra, h
    x_true = seeded_unitary(a, lv.inclusion.T, seed)
    v = leg_mul([a, q.alg], np.outer(x_true, q.alg.unit), lv.rho.rho_of(a.star(x_true)))
    result = one_cocycle_trivialize(rw, v, tol)
    payload = {
        "residual_before": result.residual_before,
        "residual_after": result.residual_after,
        "iterations": result.iterations,
    }
    return payload, result.report


def run_trivialize2(obj, seed: int = 0, tol: Tolerance = DEFAULT_TOL):
    h = _need_hopf(obj, "trivialize-2")
    lv, rw = _level_two(h, tol)
    g = seeded_counital_unitary(lv.algebra, h, lv.inclusion.T, seed)
    twisted = exterior_transform(untwisted(lv.rho), g)
    once = two_cocycle_trivialize_once(twisted, rw, tol)
    iterative = two_cocycle_trivialize_iterative(twisted, rw, tol=tol)
    report = ResidualReport()
    report.extend(once.report, prefix="once.")
    report.extend(iterative.report, prefix="iterative.")
    payload = {
        "residual_before": once.residual_before,
        "residual_after_once": once.residual_after,
        "residual_after_iterative": iterative.residual_after,
        "iterations": iterative.iterations,
        "L": once.L,
        "history": [float(t) for t in iterative.history],
    }
    return payload, report


def _scoped_elements(rows, seed: int, count: int):
    rng = np.random.default_rng(seed)
    rows = np.asarray(rows)
    out = []
    for _ in range(count):
        c = rng.standard_normal(rows.shape[0]) + 1j * rng.standard_normal(rows.shape[0])
        out.append(rows.T @ (c / max(1.0, float(np.linalg.norm(c)))))
    return out


def run_aue(obj, seed: int = 0, tol: Tolerance = DEFAULT_TOL):
    h = _need_hopf(obj, "aue-step")
    lv, rw = _level_two(h, tol)
    a, q = lv.algebra, h
    y = seeded_unitary(a, lv.inclusion.T, seed)
    sigma = conjugate_coaction(lv.rho, y)
    v = leg_mul([a, q.alg], np.outer(y, q.alg.unit), lv.rho.rho_of(a.star(y)))
    v = leg_mul([a, q.alg], v, seeded_counital_unitary(a, h, lv.inclusion.T, seed + 1, strength=0.01))
    fset = _scoped_elements(lv.inclusion.T, seed + 2, 4) + [rw.p]
    _, report = aue_one_step(lv.rho, rw, sigma, v, fset, tol)
    return {"epsilon": report["aue.epsilon"].residual, "trial_elements": len(fset)}, report


def run_span(obj, tol: Tolerance = DEFAULT_TOL):
    h = _need_hopf(obj, "span-check")
    n = appendix_span_check(h, tol)
    report = ResidualReport()
    report.add("span.dimension", float(abs(n - h.N**2)), 0.0)
    return {"dimension": int(n), "expected": int(h.N**2)}, report


OPERATIONS = (
    "validate",
    "dual",
    "haar",
    "comatrix",
    "crossed",
    "duality-check",
    "tower",
    "rohlin-check",
    "trivialize-1",
    "trivialize-2",
    "aue-step",
    "span-check",
)


def dispatch(name: str, obj, tol: Tolerance = DEFAULT_TOL, seed: int = 0,
             level: int | None = None):
    """Route an operation name to its handler; level defaults per operation."""
    if name == "validate":
        return run_validate(obj, tol)
    if name == "dual":
        return run_dual(obj, tol)
    if name == "haar":
        return run_haar(obj, tol)
    if name == "comatrix":
        return run_comatrix(obj, tol)
    if name == "crossed":
        return run_crossed(obj, tol)
    if name == "duality-check":
        return run_duality(obj, tol)
    if name == "tower":
        return run_tower(obj, level=2 if level is None else level, tol=tol)
    if name == "rohlin-check":
        return run_rohlin(obj, level=1 if level is None else level, tol=tol)
    if name == "trivialize-1":
        return run_trivialize1(obj, seed=seed, tol=tol)
    if name == "trivialize-2":
        return run_trivialize2(obj, seed=seed, tol=tol)
    if name == "aue-step":
        return run_aue(obj, seed=seed, tol=tol)
    if name == "span-check":
        return run_span(obj, tol)
    raise KeyError(name)
