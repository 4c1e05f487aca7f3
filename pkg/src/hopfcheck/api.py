"""HTTP face of the checker.

One POST endpoint per operation, all taking the same request body: an
algebra descriptor plus the scalar options. Responses carry the usual
report payload under "report" and the operation result under "result".
Malformed descriptors come back as 400, structurally sound inputs that
the operation cannot accept (wrong kind, failed construction) as 422;
numerical failures are ordinary 200 responses with pass set to false.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .descriptors import TOOL_VERSION, descriptor_digest, parse_descriptor, report_payload
from .errors import HopfCheckError, ParseError
from .linalg import Tolerance
from .service import OPERATIONS, dispatch


class AlgebraRequest(BaseModel):
    algebra: dict
    tol: float = 1e-9
    seed: int = 0
    level: int | None = None


def create_app() -> FastAPI:
    app = FastAPI(title="hopfcheck", version=TOOL_VERSION)

    @app.exception_handler(ParseError)
    async def _parse_error(request: Request, exc: ParseError):
        return JSONResponse(status_code=400, content={"error": str(exc)})

    @app.exception_handler(HopfCheckError)
    async def _check_error(request: Request, exc: HopfCheckError):
        return JSONResponse(status_code=422, content={"error": str(exc)})

    def register(name: str):
        async def endpoint(req: AlgebraRequest):
            obj = parse_descriptor(req.algebra, where="request.algebra")
            result, report = dispatch(
                name, obj, tol=Tolerance(req.tol, req.tol), seed=req.seed, level=req.level
            )
            payload = report_payload(
                report, digest=descriptor_digest(req.algebra), seed=req.seed
            )
            return {"report": payload, "result": result}

        endpoint.__name__ = name.replace("-", "_")
        app.post(f"/{name}")(endpoint)

    for name in OPERATIONS:
        register(name)

    @app.get("/health")
    async def health():
        return {"tool": "hopfcheck", "version": TOOL_VERSION}

    return app


app = create_app()
