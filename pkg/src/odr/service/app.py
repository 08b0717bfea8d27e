"""HTTP/JSON front for the case store.

Thin layer: parse, delegate, map errors. Every error body is
``{"code": ..., "message": ...}``. When a token is configured, all routes
except the health probe require ``Authorization: Bearer <token>``.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from odr.corpus_io import CorpusFormatError, case_from_dict
from odr.domain import DomainError
from odr.service.store import CaseStore, ServiceError


class RulingBody(BaseModel):
    winner: str
    summary: str = ""


class AppealBody(BaseModel):
    party: str


def create_app(store: CaseStore, token: str | None = None) -> FastAPI:
    app = FastAPI(title="dispute-resolution-service", docs_url=None, redoc_url=None)

    @app.middleware("http")
    async def check_token(request: Request, call_next):
        if token is not None and request.url.path != "/healthz":
            supplied = request.headers.get("authorization", "")
            if supplied != f"Bearer {token}":
                return JSONResponse(
                    status_code=401,
                    content={"code": "unauthorized", "message": "missing or bad token"},
                )
        return await call_next(request)

    @app.exception_handler(ServiceError)
    async def service_error(request: Request, exc: ServiceError):
        return JSONResponse(
            status_code=exc.http_status,
            content={"code": exc.code, "message": str(exc)},
        )

    @app.exception_handler(DomainError)
    async def domain_error(request: Request, exc: DomainError):
        return JSONResponse(
            status_code=400,
            content={"code": "invalid_request", "message": str(exc)},
        )

    @app.exception_handler(CorpusFormatError)
    async def format_error(request: Request, exc: CorpusFormatError):
        return JSONResponse(
            status_code=400,
            content={"code": "invalid_request", "message": str(exc)},
        )

    @app.exception_handler(RequestValidationError)
    async def validation_error(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400,
            content={"code": "invalid_request", "message": "malformed request body"},
        )

    @app.get("/healthz")
    def healthz():
        stats = store.stats()
        return {
            "status": "ok",
            "cases": stats["cases"]["total"],
            "model_loaded": stats["model"]["loaded"],
        }

    @app.post("/cases", status_code=201)
    def ingest(body: dict):
        case = case_from_dict(body)
        return {"case_id": store.ingest_case(case)}

    @app.get("/queue")
    def queue(limit: int | None = None):
        return {"entries": [e.to_dict() for e in store.queue(limit=limit)]}

    @app.get("/cases/{case_id}")
    def get_case(case_id: str):
        return store.get_case(case_id)

    @app.get("/cases/{case_id}/prediction")
    def get_prediction(case_id: str):
        return store.get_prediction(case_id)

    @app.post("/cases/{case_id}/ruling")
    def record_ruling(case_id: str, body: RulingBody):
        return store.record_ruling(case_id, body.winner, agent_summary=body.summary)

    @app.post("/cases/{case_id}/appeal")
    def file_appeal(case_id: str, body: AppealBody):
        return store.file_appeal(case_id, body.party)

    @app.get("/stats")
    def stats():
        return store.stats()

    return app
