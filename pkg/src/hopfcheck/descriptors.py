"""JSON interchange: algebra descriptors in, residual reports out.

An algebra file is UTF-8 JSON holding either a builder descriptor
({"kind": "function_algebra", "group": [[0,1],[1,0]]}, kinds listed in
BUILDER_KINDS) or raw structure tensors under kind "raw". Raw tensors
use sparse entries [i, j, k, re, im] for mult (coefficient of b_k in
b_i·b_j) and comult (coefficient of b_i⊗b_j in the coproduct of b_k),
dense matrices of [re, im] pairs for star and antipode, and [re, im]
lists for unit and counit. A raw file carrying any of comult, counit,
antipode must carry all three and parses to a Hopf algebra; otherwise
it parses to a bare *-algebra. Raw inputs are validated on parse;
builder outputs are trusted.

Reports serialize with a fixed key order, floats via repr, and no
timestamps, so two runs over the same input and seed produce
byte-identical files. Timing is an opt-in field left null by default;
non-finite tolerances serialize as null.
"""

from __future__ import annotations

import hashlib
import json
import math
from pathlib import Path

import numpy as np

from .algebra import StructureAlgebra, tensor_algebra, validate_algebra
from .errors import ParseError, StructureFailure
from .hopf import HopfAlgebra, build_function_algebra, build_group_algebra, dual, tensor_hopf, validate_hopf
from .report import ResidualReport
from .tower import build_base

TOOL_VERSION = "0.1.0"
BUILDER_KINDS = ("function_algebra", "group_algebra", "dual", "tensor", "crossed_base", "raw")


def _scalar(x, where: str) -> complex:
    ok = (
        isinstance(x, list)
        and len(x) == 2
        and all(isinstance(t, (int, float)) and not isinstance(t, bool) for t in x)
    )
    if not ok:
        raise ParseError(f"{where}: numbers are [re, im] pairs, got {x!r}")
    return complex(x[0], x[1])


def _vector(items, n: int, where: str):
    if not isinstance(items, list) or len(items) != n:
        raise ParseError(f"{where}: expected {n} [re, im] pairs")
    return np.array([_scalar(x, where) for x in items], dtype=np.complex128)


def _matrix(rows, n: int, where: str):
    if not isinstance(rows, list) or len(rows) != n:
        raise ParseError(f"{where}: expected a dense {n}x{n} matrix")
    return np.stack([_vector(row, n, where) for row in rows])


def _tensor3(items, n: int, where: str):
    out = np.zeros((n, n, n), dtype=np.complex128)
    if not isinstance(items, list):
        raise ParseError(f"{where}: expected a list of [i, j, k, re, im] entries")
    for entry in items:
        if not (isinstance(entry, list) and len(entry) == 5):
            raise ParseError(f"{where}: entries are [i, j, k, re, im], got {entry!r}")
        i, j, k = entry[:3]
        if not all(isinstance(t, int) and 0 <= t < n for t in (i, j, k)):
            raise ParseError(f"{where}: index out of range in {entry!r}")
        out[i, j, k] += complex(entry[3], entry[4])
    return out


def _group_table(doc, where: str):
    table = doc.get("group")
    if not isinstance(table, list) or not table:
        raise ParseError(f"{where}: builder needs a 'group' Cayley table")
    n = len(table)
    for row in table:
        if not (isinstance(row, list) and len(row) == n
                and all(isinstance(t, int) and 0 <= t < n for t in row)):
            raise ParseError(f"{where}: Cayley table must be {n} rows of indices below {n}")
    return table


def _checked(obj, report: ResidualReport, where: str):
    bad = report.failures()
    if bad:
        worst = max(bad, key=lambda e: e.residual)
        raise StructureFailure(
            f"{where}: {worst.name} residual {worst.residual:.3e} exceeds {worst.tolerance:.1e}"
        )
    return obj


def parse_descriptor(doc, where: str = "input"):
    """Build a HopfAlgebra or StructureAlgebra from a descriptor dict."""
    if not isinstance(doc, dict):
        raise ParseError(f"{where}: descriptor must be a JSON object")
    kind = doc.get("kind")
    if kind not in BUILDER_KINDS:
        raise ParseError(f"{where}: unknown kind {kind!r}, expected one of {', '.join(BUILDER_KINDS)}")
    label = doc.get("label", "")
    if not isinstance(label, str):
        raise ParseError(f"{where}: label must be a string")

    if kind == "function_algebra":
        return build_function_algebra(_group_table(doc, where), label=label)
    if kind == "group_algebra":
        return build_group_algebra(_group_table(doc, where), label=label)
    if kind == "dual":
        inner = parse_descriptor(doc.get("of"), where=f"{where}.of")
        if not isinstance(inner, HopfAlgebra):
            raise ParseError(f"{where}: dual needs a Hopf algebra operand")
        return dual(inner)
    if kind == "tensor":
        factors = doc.get("factors")
        if not (isinstance(factors, list) and len(factors) == 2):
            raise ParseError(f"{where}: tensor needs exactly two factors")
        left = parse_descriptor(factors[0], where=f"{where}.factors[0]")
        right = parse_descriptor(factors[1], where=f"{where}.factors[1]")
        if isinstance(left, HopfAlgebra) and isinstance(right, HopfAlgebra):
            return tensor_hopf(left, right, label=label)
        la = left.alg if isinstance(left, HopfAlgebra) else left
        ra = right.alg if isinstance(right, HopfAlgebra) else right
        return tensor_algebra(la, ra, label=label)
    if kind == "crossed_base":
        inner = parse_descriptor(doc.get("of"), where=f"{where}.of")
        if not isinstance(inner, HopfAlgebra):
            raise ParseError(f"{where}: crossed_base needs a Hopf algebra operand")
        return build_base(inner).alg

    labels = doc.get("labels")
    if not (isinstance(labels, list) and labels
            and all(isinstance(s, str) for s in labels)):
        raise ParseError(f"{where}: raw descriptor needs a 'labels' list of strings")
    n = len(labels)
    alg = StructureAlgebra(
        _tensor3(doc.get("mult"), n, f"{where}.mult"),
        _vector(doc.get("unit"), n, f"{where}.unit"),
        _matrix(doc.get("star"), n, f"{where}.star"),
        label=label,
    )
    hopf_keys = [k for k in ("comult", "counit", "antipode") if k in doc]
    if not hopf_keys:
        return _checked(alg, validate_algebra(alg), where)
    if len(hopf_keys) != 3:
        raise ParseError(f"{where}: comult, counit and antipode must appear together")
    _checked(alg, validate_algebra(alg), where)
    h = HopfAlgebra(
        alg,
        _tensor3(doc["comult"], n, f"{where}.comult"),
        _vector(doc["counit"], n, f"{where}.counit"),
        _matrix(doc["antipode"], n, f"{where}.antipode"),
        label=label,
    )
    return _checked(h, validate_hopf(h), where)


def load_algebra(path):
    """Read and parse an algebra file; returns (algebra, input digest)."""
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    digest = "sha256:" + hashlib.sha256(raw).hexdigest()
    try:
        doc = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, ValueError) as exc:
        raise ParseError(f"{path}: not UTF-8 JSON ({exc})") from None
    return parse_descriptor(doc, where=str(path)), digest


def descriptor_digest(doc) -> str:
    """Digest of a descriptor already in memory, over its canonical JSON."""
    blob = json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    return "sha256:" + hashlib.sha256(blob.encode("utf-8")).hexdigest()


def _pairs(vec):
    return [[float(z.real), float(z.imag)] for z in np.asarray(vec, dtype=np.complex128)]


def _pair_matrix(mat):
    return [_pairs(row) for row in np.asarray(mat, dtype=np.complex128)]


def _sparse3(tensor):
    t = np.asarray(tensor, dtype=np.complex128)
    out = []
    for i, j, k in zip(*np.nonzero(t)):
        z = t[i, j, k]
        out.append([int(i), int(j), int(k), float(z.real), float(z.imag)])
    return out


def descriptor_of(obj) -> dict:
    """Raw-tensor descriptor of an algebra, inverse of parse_descriptor."""
    if isinstance(obj, HopfAlgebra):
        out = descriptor_of(obj.alg)
        out["comult"] = _sparse3(obj.comult)
        out["counit"] = _pairs(obj.counit)
        out["antipode"] = _pair_matrix(obj.antipode)
        return out
    out = {
        "kind": "raw",
        "labels": [f"b{i}" for i in range(obj.dim)],
        "mult": _sparse3(obj.mult),
        "unit": _pairs(obj.unit),
        "star": _pair_matrix(obj.star_matrix),
    }
    if obj.label:
        out["label"] = obj.label
    return out


def report_payload(report: ResidualReport, *, digest: str = "", seed: int = 0,
                   timing=None) -> dict:
    entries = []
    for e in report.entries:
        d = e.as_dict()
        if not math.isfinite(d["tolerance"]):
            d["tolerance"] = None
        entries.append(d)
    return {
        "tool": "hopfcheck",
        "version": TOOL_VERSION,
        "input_digest": digest,
        "seed": int(seed),
        "pass": bool(report.passed),
        "entries": entries,
        "timing": timing,
    }


def render_json(payload) -> str:
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


def write_report(path, payload) -> None:
    Path(path).write_text(render_json(payload), encoding="utf-8")
