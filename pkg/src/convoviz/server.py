"""REST interface: one session per uploaded dataset, JSON in and out.

Endpoints:
    POST   /sessions                       create a session (upload or sample)
    GET    /sessions/{sid}                 session info
    POST   /sessions/{sid}/analyze         run a query
    POST   /sessions/{sid}/resolve         settle ambiguities on a stored query
    GET    /sessions/{sid}/conversations   full dialog store
    DELETE /sessions/{sid}/dialogs/{did}   drop a dialog (or ?queryId= tail)
    GET    /samples                        bundled demo dataset names
    GET    /spec                           OpenAPI document

Sessions persist as one JSON file each under CONVOVIZ_DATA_DIR (default
~/.convoviz/sessions) holding the dataset as CSV plus the conversation
store, so a restarted server picks up where clients left off.

Engine errors map onto HTTP statuses: unreadable input is 400, missing
things are 404, state conflicts are 409, and requests that are well-formed
but unprocessable are 422. Bodies carry {"error": {"code", "message"}}.
"""

from __future__ import annotations

import json
import logging
import os
import uuid
from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .conversation import Engine
from .dataset import SAMPLE_NAMES, load_dataset, load_sample
from .errors import (
    ConvovizError,
    EmptyQuery,
    EmptyTable,
    IllegalChartOverride,
    MalformedTable,
    NoConversationToFollowUp,
    NoResolvableAttributes,
    SelectionNotAnOption,
    TargetNotFound,
    TargetNotInParent,
    UnclassifiableFollowUp,
    UnknownAmbiguityKeyword,
    UnknownDialogOrQueryId,
    UnreadableSource,
    UnresolvedAmbiguities,
)
from .lexicon import KeywordMaps

logger = logging.getLogger(__name__)

DEFAULT_PORT = 8140

_STATUS_BY_ERROR = {
    UnreadableSource: 400,
    MalformedTable: 400,
    EmptyTable: 400,
    UnknownDialogOrQueryId: 404,
    TargetNotFound: 404,
    NoConversationToFollowUp: 409,
    UnresolvedAmbiguities: 409,
    EmptyQuery: 422,
    NoResolvableAttributes: 422,
    SelectionNotAnOption: 422,
    UnknownAmbiguityKeyword: 422,
    IllegalChartOverride: 422,
    TargetNotInParent: 422,
    UnclassifiableFollowUp: 422,
}


def _status_for(exc: ConvovizError) -> int:
    for klass, status in _STATUS_BY_ERROR.items():
        if isinstance(exc, klass):
            return status
    return 500


def _error_body(code: str, message: str) -> dict:
    return {"error": {"code": code, "message": message}}


class SessionHub:
    """Engines keyed by session id, mirrored to per-session JSON files."""

    def __init__(self, data_dir: Path):
        self.data_dir = data_dir
        self.engines: dict[str, Engine] = {}
        self.configs: dict[str, dict] = {}
        self.data_dir.mkdir(parents=True, exist_ok=True)

    def _path(self, session_id: str) -> Path:
        return self.data_dir / f"{session_id}.json"

    def create(self, *, csv_text: str | None, sample: str | None,
               config: dict, dataset_id: str | None = None) -> str:
        dataset_config = config.get("datasetConfig") or {}
        if sample is not None:
            dataset = load_sample(sample, config=dataset_config)
        elif csv_text is not None:
            dataset = load_dataset(csv_text, "csv", config=dataset_config,
                                   dataset_id=dataset_id or "upload")
        else:
            raise UnreadableSource("provide a csv file or a sample datasetId")
        session_id = uuid.uuid4().hex[:12]
        self.engines[session_id] = self._build_engine(dataset, config)
        self.configs[session_id] = config
        self.save(session_id)
        logger.info("session %s created on dataset %r (%d rows)",
                    session_id, dataset.id, dataset.row_count)
        return session_id

    @staticmethod
    def _build_engine(dataset, config: dict) -> Engine:
        keywords = None
        if config.get("keywords"):
            keywords = KeywordMaps.from_dict(config["keywords"])
        # interactive clients resolve ambiguities through widgets, so
        # auto-resolution is opt-in here, unlike the library default
        return Engine(dataset, keywords=keywords,
                      auto_resolve=bool(config.get("autoResolve", False)))

    def get(self, session_id: str) -> Engine:
        engine = self.engines.get(session_id)
        if engine is None:
            engine = self._load(session_id)
        if engine is None:
            raise TargetNotFound(f"unknown session: {session_id}")
        return engine

    def save(self, session_id: str) -> None:
        engine = self.engines[session_id]
        payload = {
            "sessionId": session_id,
            "datasetId": engine.dataset.id,
            "datasetCsv": engine.dataset.export("csv"),
            "config": self.configs.get(session_id, {}),
            "conversations": engine.store.to_dict(),
            "mostRecent": engine.store.most_recent_ids(),
        }
        self._path(session_id).write_text(
            json.dumps(payload, ensure_ascii=False, indent=2), encoding="utf-8")

    def _load(self, session_id: str) -> Engine | None:
        path = self._path(session_id)
        if not path.exists():
            return None
        payload = json.loads(path.read_text(encoding="utf-8"))
        config = payload.get("config", {})
        dataset = load_dataset(payload["datasetCsv"], "csv",
                               config=config.get("datasetConfig") or {},
                               dataset_id=payload["datasetId"])
        engine = self._build_engine(dataset, config)
        from .conversation import DialogStore

        most_recent = payload.get("mostRecent")
        engine.store = DialogStore.from_dict(
            payload.get("conversations", {}),
            tuple(most_recent) if most_recent else None)
        self.engines[session_id] = engine
        self.configs[session_id] = config
        logger.info("session %s restored from %s", session_id, path)
        return engine


def create_app(data_dir: str | os.PathLike | None = None) -> FastAPI:
    data_dir = Path(data_dir or os.environ.get("CONVOVIZ_DATA_DIR")
                    or Path.home() / ".convoviz" / "sessions")
    app = FastAPI(title="convoviz", version="1.0.0",
                  description="Natural language queries over tabular data, "
                              "returning chart specifications.")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    hub = SessionHub(data_dir)
    app.state.hub = hub

    @app.exception_handler(ConvovizError)
    async def convoviz_error(request: Request, exc: ConvovizError):
        return JSONResponse(status_code=_status_for(exc),
                            content=_error_body(exc.code, str(exc)))

    @app.exception_handler(ValueError)
    async def value_error(request: Request, exc: ValueError):
        return JSONResponse(status_code=422,
                            content=_error_body("invalid_argument", str(exc)))

    @app.get("/samples")
    async def samples():
        return {"samples": list(SAMPLE_NAMES)}

    @app.post("/sessions", status_code=201)
    async def create_session(request: Request):
        content_type = request.headers.get("content-type", "")
        csv_text = None
        sample = None
        dataset_id = None
        config: dict = {}
        if content_type.startswith("multipart/form-data"):
            form = await request.form()
            upload = form.get("file")
            if upload is not None and hasattr(upload, "read"):
                raw = await upload.read()
                csv_text = raw.decode("utf-8-sig")
                dataset_id = os.path.splitext(upload.filename or "upload")[0]
            sample = form.get("datasetId") or None
            if form.get("config"):
                config = json.loads(form["config"])
        else:
            body = await request.json() if await request.body() else {}
            sample = body.get("datasetId")
            csv_text = body.get("csv")
            dataset_id = body.get("name")
            config = body.get("config") or {}
        session_id = hub.create(csv_text=csv_text, sample=sample,
                                config=config, dataset_id=dataset_id)
        engine = hub.get(session_id)
        return {
            "sessionId": session_id,
            "datasetId": engine.dataset.id,
            "rowCount": engine.dataset.row_count,
            "attributes": [a.to_dict() for a in engine.dataset.attributes],
        }

    @app.get("/sessions/{session_id}")
    async def session_info(session_id: str):
        engine = hub.get(session_id)
        return {
            "sessionId": session_id,
            "datasetId": engine.dataset.id,
            "rowCount": engine.dataset.row_count,
            "attributes": [a.to_dict() for a in engine.dataset.attributes],
            "config": hub.configs.get(session_id, {}),
        }

    @app.post("/sessions/{session_id}/analyze")
    async def analyze(session_id: str, request: Request):
        engine = hub.get(session_id)
        body = await request.json()
        query = body.get("query", "")
        dialog = body.get("dialog", None)
        result = engine.analyze_query(
            query,
            dialog=dialog,
            dialog_id=body.get("dialogId"),
            query_id=body.get("queryId"),
        )
        hub.save(session_id)
        return Response(content=result.to_json(), media_type="application/json")

    @app.post("/sessions/{session_id}/resolve")
    async def resolve(session_id: str, request: Request):
        engine = hub.get(session_id)
        body = await request.json()
        result = engine.update_query(
            body.get("resolutions") or {},
            dialog_id=body.get("dialogId"),
            query_id=body.get("queryId"),
        )
        hub.save(session_id)
        return Response(content=result.to_json(), media_type="application/json")

    @app.get("/sessions/{session_id}/conversations")
    async def conversations(session_id: str):
        engine = hub.get(session_id)
        return Response(
            content=json.dumps(engine.conversations(), ensure_ascii=False, indent=2),
            media_type="application/json")

    @app.delete("/sessions/{session_id}/dialogs/{dialog_id}", status_code=204)
    async def delete_dialog(session_id: str, dialog_id: str,
                            queryId: str | None = None):
        engine = hub.get(session_id)
        engine.delete(dialog_id, queryId)
        hub.save(session_id)
        return Response(status_code=204)

    @app.get("/spec")
    async def spec():
        return app.openapi()

    return app


def run(port: int | None = None, data_dir: str | None = None) -> None:
    """Start the API server (blocking)."""
    import uvicorn

    port = port or int(os.environ.get("CONVOVIZ_PORT", DEFAULT_PORT))
    uvicorn.run(create_app(data_dir), host="0.0.0.0", port=port)
