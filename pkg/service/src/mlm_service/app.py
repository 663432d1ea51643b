"""HTTP surface of the scoring service.

Three routes: POST /v1/score returns per-mask piece predictions,
GET /v1/info describes the loaded model, GET /v1/health reports
readiness.  Every route answers 503 until an engine is attached, so a
process that is still loading weights is visibly not ready rather than
half-working.  Malformed bodies and semantic request errors are 400,
over-length sequences are 413.  The service keeps no state between
requests; two identical score calls return identical bytes.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .engine import ScoreRequestError, ScoringEngine


class ScoreBody(BaseModel):
    pieces: list[str]
    mask_positions: list[int]
    top_k: int


def create_app(engine: ScoringEngine | None = None) -> FastAPI:
    """Build the application, optionally around an already-loaded engine.

    Passing ``None`` yields an app stuck in the loading state; attach an
    engine later by assigning ``app.state.engine``.
    """
    app = FastAPI(title="mlm-service", docs_url=None, redoc_url=None)
    app.state.engine = engine

    @app.exception_handler(RequestValidationError)
    async def malformed_body(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"error": "malformed request"})

    def ready_engine() -> ScoringEngine | None:
        return app.state.engine

    @app.get("/v1/health")
    def health():
        if ready_engine() is None:
            return JSONResponse(status_code=503, content={"status": "loading"})
        return {"status": "ok"}

    @app.get("/v1/info")
    def info():
        engine = ready_engine()
        if engine is None:
            return JSONResponse(
                status_code=503, content={"error": "model not loaded"}
            )
        return {
            "model": engine.model_name,
            "vocab_hash": engine.inventory.content_hash,
            "max_sequence_length": engine.max_sequence_length,
        }

    @app.post("/v1/score")
    def score(body: ScoreBody):
        engine = ready_engine()
        if engine is None:
            return JSONResponse(
                status_code=503, content={"error": "model not loaded"}
            )
        try:
            predictions = engine.score(body.pieces, body.mask_positions, body.top_k)
        except ScoreRequestError as exc:
            return JSONResponse(
                status_code=exc.status, content={"error": exc.message}
            )
        return {
            "predictions": [
                [{"piece": piece, "log_prob": log_prob} for piece, log_prob in mask]
                for mask in predictions
            ]
        }

    return app
