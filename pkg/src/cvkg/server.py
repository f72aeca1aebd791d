"""HTTP service: SPARQL endpoint (protocol subset), dataset/category/statistics
APIs, query-driven export, and image files.

Every endpoint reads one immutable snapshot published in the SnapshotBox, so
requests never observe a mid-write store; swapping the box is atomic."""

from __future__ import annotations

import mimetypes
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, PlainTextResponse, Response

from . import catalog
from .errors import DataError, ExportError, SparqlError
from .export import ExportRequest, build_manifest, write_payload
from .sparql import evaluate, parse_query, solutions_to_json
from .store import StoreSnapshot

MAX_GET_QUERY_LENGTH = 8192


@dataclass
class ServiceConfig:
    port: int = 8080
    base_iri: str = ""
    image_roots: dict[str, Path] = field(default_factory=dict)
    max_rows: int = 10_000
    cors_allowed: bool = False

    def __post_init__(self):
        if not (1 <= self.port <= 65535):
            raise ValueError(f"port out of range: {self.port}")
        if self.max_rows <= 0:
            raise ValueError("maxRows must be positive")


class SnapshotBox:
    """Holder for the currently published snapshot; swap() is atomic."""

    def __init__(self, snapshot: StoreSnapshot):
        self._snapshot = snapshot

    @property
    def current(self) -> StoreSnapshot:
        return self._snapshot

    def swap(self, snapshot: StoreSnapshot) -> None:
        self._snapshot = snapshot


def _sparql_error_response(exc: SparqlError) -> JSONResponse:
    return JSONResponse(
        status_code=400,
        content={
            "error": {
                "message": str(exc),
                "line": exc.line,
                "column": exc.column,
                "expected": exc.expected,
            }
        },
    )


def create_app(snapshots: SnapshotBox | StoreSnapshot, config: ServiceConfig | None = None) -> FastAPI:
    box = snapshots if isinstance(snapshots, SnapshotBox) else SnapshotBox(snapshots)
    config = config or ServiceConfig()
    app = FastAPI(title="cvkg", docs_url=None, redoc_url=None)

    if config.cors_allowed:
        from fastapi.middleware.cors import CORSMiddleware

        app.add_middleware(
            CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
        )

    def run_query(query_text: str) -> Response:
        try:
            query = parse_query(query_text)
            solutions = evaluate(query, box.current)
        except SparqlError as exc:
            return _sparql_error_response(exc)
        truncated = len(solutions.rows) > config.max_rows
        if truncated:
            solutions.rows = solutions.rows[: config.max_rows]
        headers = {"X-Truncated": "true"} if truncated else {}
        return JSONResponse(
            content=solutions_to_json(solutions),
            media_type="application/sparql-results+json",
            headers=headers,
        )

    @app.get("/sparql")
    async def sparql_get(request: Request):
        if len(str(request.url.query)) > MAX_GET_QUERY_LENGTH:
            return PlainTextResponse("query too long for GET; use POST", status_code=414)
        query_text = request.query_params.get("query")
        if query_text is None:
            return JSONResponse(status_code=400, content={"error": {"message": "missing query parameter"}})
        return run_query(query_text)

    @app.post("/sparql")
    async def sparql_post(request: Request):
        content_type = request.headers.get("content-type", "").split(";")[0].strip()
        if content_type == "application/sparql-query":
            query_text = (await request.body()).decode("utf-8")
        elif content_type == "application/x-www-form-urlencoded":
            form = await request.form()
            query_text = form.get("query")
            if query_text is None:
                return JSONResponse(status_code=400, content={"error": {"message": "missing query field"}})
        else:
            return JSONResponse(
                status_code=400,
                content={
                    "error": {
                        "message": "unsupported content type; use application/sparql-query or a urlencoded form"
                    }
                },
            )
        return run_query(query_text)

    @app.get("/datasets")
    async def datasets():
        return catalog.list_datasets(box.current)

    @app.get("/categories")
    async def categories(dataset: str | None = None, task: str | None = None, q: str | None = None):
        try:
            return catalog.list_categories(box.current, dataset=dataset, task=task, q=q)
        except KeyError:
            return JSONResponse(status_code=404, content={"error": {"message": f"unknown dataset {dataset!r}"}})

    @app.get("/statistics")
    async def statistics():
        return catalog.statistics(box.current)

    @app.post("/export")
    async def export(request: Request, manifest: bool = False):
        try:
            body = await request.json()
        except Exception:
            return JSONResponse(status_code=400, content={"error": {"message": "body must be JSON"}})
        try:
            export_request = ExportRequest.from_json_dict(body)
            built = build_manifest(export_request, box.current)
        except SparqlError as exc:
            return _sparql_error_response(exc)
        except ExportError as exc:
            status = 422 if exc.code == "empty-result" else 400
            return JSONResponse(status_code=status, content={"error": {"message": str(exc), "code": exc.code}})
        except DataError as exc:
            return JSONResponse(status_code=400, content={"error": {"message": str(exc)}})
        if manifest:
            return JSONResponse(content=built.to_json_dict())
        try:
            payload = write_payload(export_request, built)
        except ExportError as exc:
            return JSONResponse(status_code=400, content={"error": {"message": str(exc), "code": exc.code}})
        if export_request.format == "coco":
            return Response(content=payload, media_type="application/json")
        if export_request.format == "kitti":
            return JSONResponse(content=payload)
        return PlainTextResponse(content=payload, media_type="text/csv")

    @app.get("/images/{slug}/{file_name:path}")
    async def image(slug: str, file_name: str):
        root = config.image_roots.get(slug)
        if root is None:
            return PlainTextResponse("unknown dataset image root", status_code=404)
        root = Path(root).resolve()
        target = (root / file_name).resolve()
        if root != target and root not in target.parents:
            return PlainTextResponse("forbidden", status_code=403)
        if not target.is_file():
            return PlainTextResponse("not found", status_code=404)
        media_type = mimetypes.guess_type(target.name)[0] or "application/octet-stream"
        return Response(content=target.read_bytes(), media_type=media_type)

    return app


def serve(snapshot: StoreSnapshot, config: ServiceConfig) -> None:
    import uvicorn

    app = create_app(snapshot, config)
    uvicorn.run(app, host="0.0.0.0", port=config.port, log_level="info")
