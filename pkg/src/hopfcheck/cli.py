"""Command line front end.

Every operation reads one JSON algebra file and prints the resulting
check entries; --report writes the same entries as a machine-readable
file. Work happens in-process unless --server points at a running HTTP
instance, in which case the file is posted there and the response is
rendered identically.

Exit codes: 0 all checks pass, 2 unreadable input, 3 the operation
could not run to completion, 4 the report contains failing entries.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import httpx

from .descriptors import (
    TOOL_VERSION,
    load_algebra,
    render_json,
    report_payload,
    write_report,
)
from .errors import HopfCheckError, ParseError
from .linalg import Tolerance
from .service import OPERATIONS, dispatch

EXIT_PASS = 0
EXIT_PARSE = 2
EXIT_ERROR = 3
EXIT_FAIL = 4

_HELP = {
    "validate": "check the algebra (or Hopf algebra) axioms",
    "dual": "build the dual Hopf algebra and validate it",
    "haar": "compute the Haar projection and Haar state",
    "comatrix": "compute comatrix units and their identities",
    "crossed": "build the canonical crossed product of the input with its dual",
    "duality-check": "build the double crossed product and verify the duality isomorphism",
    "tower": "build the iterated inclusion tower and check each level",
    "rohlin-check": "verify the tower projections and convert them to dual-side witnesses",
    "trivialize-1": "trivialize a seeded coboundary one-cocycle at tower level two",
    "trivialize-2": "trivialize a seeded two-cocycle perturbation at tower level two",
    "aue-step": "run the one-step conjugation corrector on seeded data",
    "span-check": "print the span dimension of the comultiplication image",
}


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="hopfcheck",
        description="numerical checks for finite-dimensional C*-Hopf algebras",
    )
    top.add_argument("--version", action="version", version=f"hopfcheck {TOOL_VERSION}")
    sub = top.add_subparsers(dest="command", required=True)
    for name in OPERATIONS:
        p = sub.add_parser(name, help=_HELP[name])
        p.add_argument("file", nargs="?", help="algebra description, JSON")
        p.add_argument("--hopf", metavar="FILE", help="alternative spelling of the input file")
        p.add_argument("--tol", type=float, default=1e-9, help="absolute tolerance (default 1e-9)")
        p.add_argument("--seed", type=int, default=0, help="seed for randomized constructions")
        p.add_argument("--level", "--max-level", dest="level", type=int, default=None,
                       help="tower depth for tower and rohlin-check")
        p.add_argument("--report", metavar="PATH", help="write the report as JSON")
        p.add_argument("--format", choices=("human", "json"), default="human",
                       help="stdout format")
        p.add_argument("--timing", action="store_true",
                       help="record wall time in the report (off by default so bytes reproduce)")
        p.add_argument("--server", metavar="URL",
                       help="post the request to a running service instead of computing here")
    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    return top


def _input_path(args) -> str:
    if args.file and args.hopf:
        raise ParseError("give the input either positionally or via --hopf, not both")
    path = args.file or args.hopf
    if not path:
        raise ParseError("no input file given")
    return path


def _run_local(args):
    started = time.perf_counter()
    obj, digest = load_algebra(_input_path(args))
    result, report = dispatch(
        args.command, obj,
        tol=Tolerance(args.tol, args.tol), seed=args.seed, level=args.level,
    )
    timing = {"seconds": round(time.perf_counter() - started, 6)} if args.timing else None
    return report_payload(report, digest=digest, seed=args.seed, timing=timing), result


def _run_remote(args):
    path = _input_path(args)
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    except ValueError as exc:
        raise ParseError(f"{path}: not valid JSON ({exc})") from None

    body = {"algebra": doc, "tol": args.tol, "seed": args.seed}
    if args.level is not None:
        body["level"] = args.level
    url = args.server.rstrip("/") + "/" + args.command
    try:
        resp = httpx.post(url, json=body, timeout=600.0)
    except httpx.HTTPError as exc:
        raise HopfCheckError(f"server request failed: {exc}") from None

    if resp.status_code == 400:
        raise ParseError(resp.json().get("error", resp.text))
    if resp.status_code != 200:
        try:
            message = resp.json().get("error", resp.text)
        except ValueError:
            message = resp.text
        raise HopfCheckError(f"server returned {resp.status_code}: {message}")
    data = resp.json()
    return data["report"], data["result"]


def _render(args, body, result) -> None:
    if args.format == "json":
        sys.stdout.write(render_json({"report": body, "result": result}))
        return
    if args.command == "span-check":
        print(result["dimension"])
        return
    for e in body["entries"]:
        flag = "ok  " if e["pass"] else "FAIL"
        tol_s = "none" if e["tolerance"] is None else f"{e['tolerance']:.1e}"
        print(f"{flag} {e['name']:44s} {e['residual']:10.3e}  (tol {tol_s})")
    failed = sum(1 for e in body["entries"] if not e["pass"])
    print(f"{len(body['entries'])} checks, {failed} failed")


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "serve":
        import uvicorn

        uvicorn.run("hopfcheck.api:app", host=args.host, port=args.port)
        return EXIT_PASS
    try:
        if args.server:
            body, result = _run_remote(args)
        else:
            body, result = _run_local(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except HopfCheckError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if args.report:
        write_report(args.report, body)
    _render(args, body, result)
    return EXIT_PASS if body["pass"] else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
