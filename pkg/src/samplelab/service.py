"""HTTP service binding the sampling core, providers and store together.

All endpoints live under ``/api``; the web UI's static files are served from
``/`` by the same process. Error bodies always carry a machine-readable code
and a human-readable message:

    {"error": {"code": "...", "message": "...", ...}}
"""

from __future__ import annotations

import secrets
from datetime import datetime, timezone
from pathlib import Path
from uuid import uuid4

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import HTMLResponse, JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from samplelab.descriptions import HYPERPARAMETERS
from samplelab.providers.base import (
    DISTRIBUTION_MODE,
    ProviderError,
    ProviderRegistry,
    UnknownProviderError,
)
from samplelab.sampling import (
    AllZeroWeightsError,
    ParameterRangeError,
    SamplingParams,
    generate_sequence,
)
from samplelab.store import (
    AlreadyRatedError,
    InteractionRecord,
    JsonLinesStore,
    NotFoundError,
    RatingOutOfRangeError,
    SerializationFailureError,
    StorageFullError,
)

MAX_TOKENS_CAP = 4096
DEFAULT_MAX_TOKENS = 128
DEFAULT_PAGE_LIMIT = 100


class ApiError(Exception):
    """Maps directly onto one JSON error response."""

    def __init__(self, status: int, code: str, message: str, **extras):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.extras = extras

    def to_response(self) -> JSONResponse:
        body = {"code": self.code, "message": self.message}
        body.update(self.extras)
        return JSONResponse(status_code=self.status, content={"error": body})


class GenerateRequest(BaseModel):
    prompt: str
    top_p: float = 0.9
    frequency_penalty: float = 0.0
    presence_penalty: float = 0.0
    seed: int | None = None
    provider_id: str | None = None
    max_tokens: int = DEFAULT_MAX_TOKENS


class RatingRequest(BaseModel):
    score: int


def _utc_now_rfc3339() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="microseconds")


def _record_json(record: InteractionRecord) -> dict:
    return {
        "id": record.id,
        "prompt": record.prompt,
        "params": {
            "top_p": record.params.top_p,
            "frequency_penalty": record.params.frequency_penalty,
            "presence_penalty": record.params.presence_penalty,
            "seed": record.params.seed,
        },
        "output": record.output,
        "provider_id": record.provider_id,
        "sampled_locally": record.sampled_locally,
        "created_at": record.created_at,
        "rating": record.rating,
    }


_LANDING_PAGE = """<!doctype html>
<html><head><title>samplelab</title></head>
<body>
<h1>samplelab</h1>
<p>The API is up. No web UI build was found; point <code>--static-dir</code>
at a built frontend to serve it from here.</p>
<ul>
<li>POST /api/generate</li>
<li>POST /api/interactions/{id}/rating</li>
<li>GET /api/interactions</li>
<li>GET /api/interactions/{id}/score-graph</li>
<li>GET /api/hyperparameters</li>
</ul>
</body></html>
"""


def create_app(
    store: JsonLinesStore,
    providers: ProviderRegistry,
    static_dir: str | Path | None = None,
) -> FastAPI:
    """Assemble the service around an open store and a provider registry."""
    app = FastAPI(title="samplelab", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(ApiError)
    async def _api_error(_request: Request, exc: ApiError) -> JSONResponse:
        return exc.to_response()

    @app.exception_handler(RequestValidationError)
    async def _validation_error(_request: Request, exc: RequestValidationError) -> JSONResponse:
        first = exc.errors()[0] if exc.errors() else {}
        loc = ".".join(str(part) for part in first.get("loc", ()) if part != "body")
        message = first.get("msg", "invalid request")
        return ApiError(
            400, "invalid_request", f"{loc}: {message}" if loc else message, field=loc or None
        ).to_response()

    @app.exception_handler(Exception)
    async def _internal_error(_request: Request, exc: Exception) -> JSONResponse:
        return ApiError(500, "internal_error", f"{type(exc).__name__}: {exc}").to_response()

    @app.post("/api/generate")
    def generate(request: GenerateRequest) -> dict:
        if not request.prompt.strip():
            raise ApiError(
                400,
                "invalid_params",
                "prompt must be non-empty after trimming whitespace",
                field="prompt",
            )
        if not (1 <= request.max_tokens <= MAX_TOKENS_CAP):
            raise ApiError(
                400,
                "invalid_params",
                f"max_tokens must be in [1, {MAX_TOKENS_CAP}], got {request.max_tokens}",
                field="max_tokens",
                range=f"[1, {MAX_TOKENS_CAP}]",
            )
        seed = request.seed if request.seed is not None else secrets.randbits(64)
        try:
            params = SamplingParams(
                top_p=request.top_p,
                frequency_penalty=request.frequency_penalty,
                presence_penalty=request.presence_penalty,
                seed=seed,
            )
        except ParameterRangeError as exc:
            raise ApiError(
                400, "invalid_params", str(exc), field=exc.param, range=exc.allowed
            ) from exc
        try:
            provider = providers.resolve(request.provider_id)
        except UnknownProviderError as exc:
            raise ApiError(400, "unknown_provider", str(exc), field="provider_id") from exc

        rng_algorithm: str | None = None
        if provider.mode == DISTRIBUTION_MODE:
            try:
                result = generate_sequence(
                    provider, provider.tokenize(request.prompt), params, request.max_tokens
                )
            except AllZeroWeightsError as exc:
                raise ApiError(400, "all_zero_weights", str(exc)) from exc
            output = provider.detokenize(result.tokens)
            sampled_locally = True
            rng_algorithm = result.rng_algorithm
        else:
            try:
                completion = provider.complete(request.prompt, params, request.max_tokens)
            except ProviderError as exc:
                raise ApiError(
                    502,
                    "provider_error",
                    f"provider {exc.provider_id or provider.id!r} failed: {exc}",
                    provider_id=exc.provider_id or provider.id,
                ) from exc
            output = completion.text
            sampled_locally = False

        record = InteractionRecord(
            id=str(uuid4()),
            prompt=request.prompt,
            params=params,
            output=output,
            provider_id=provider.id,
            sampled_locally=sampled_locally,
            created_at=_utc_now_rfc3339(),
        )
        try:
            store.append(record)
        except (StorageFullError, SerializationFailureError) as exc:
            raise ApiError(507, "storage_failure", str(exc)) from exc
        body = {"record": _record_json(record)}
        if rng_algorithm is not None:
            body["rng_algorithm"] = rng_algorithm
        return body

    @app.post("/api/interactions/{record_id}/rating")
    def rate(record_id: str, request: RatingRequest) -> dict:
        try:
            updated = store.set_rating(record_id, request.score)
        except NotFoundError as exc:
            raise ApiError(404, "not_found", str(exc)) from exc
        except AlreadyRatedError as exc:
            raise ApiError(409, "already_rated", str(exc)) from exc
        except RatingOutOfRangeError as exc:
            raise ApiError(400, "rating_out_of_range", str(exc), field="score", range="[1, 5]") from exc
        return {"record": _record_json(updated)}

    @app.get("/api/interactions")
    def interactions(
        prompt: str | None = None,
        limit: int = DEFAULT_PAGE_LIMIT,
        offset: int = 0,
    ) -> dict:
        if not (1 <= limit <= 1000):
            raise ApiError(
                400,
                "invalid_params",
                f"limit must be in [1, 1000], got {limit}",
                field="limit",
                range="[1, 1000]",
            )
        if offset < 0:
            raise ApiError(
                400,
                "invalid_params",
                f"offset must be >= 0, got {offset}",
                field="offset",
                range="[0, inf)",
            )
        if prompt is not None:
            matches = store.query_by_prompt(prompt)
            page = matches[offset : offset + limit]
            total = len(matches)
        else:
            page = store.list_all(limit, offset)
            total = len(store)
        return {
            "records": [_record_json(r) for r in page],
            "total": total,
            "limit": limit,
            "offset": offset,
        }

    @app.get("/api/interactions/{record_id}/score-graph")
    def score_graph(record_id: str) -> dict:
        try:
            record = store.get(record_id)
        except NotFoundError as exc:
            raise ApiError(404, "not_found", str(exc)) from exc
        points = []
        for point in store.score_graph_points(record.prompt):
            entry = {
                "presence": point.presence,
                "frequency": point.frequency,
                "record_id": point.record_id,
                "current": point.record_id == record_id,
            }
            if point.rating is not None:
                entry["rating"] = point.rating
            points.append(entry)
        return {"record_id": record_id, "prompt": record.prompt, "points": points}

    @app.get("/api/hyperparameters")
    def hyperparameters() -> list[dict]:
        return [description.to_json() for description in HYPERPARAMETERS]

    static_path = Path(static_dir) if static_dir else None
    if static_path and static_path.is_dir():
        app.mount("/", StaticFiles(directory=static_path, html=True), name="ui")
    else:

        @app.get("/", include_in_schema=False)
        def landing() -> HTMLResponse:
            return HTMLResponse(_LANDING_PAGE)

    return app
