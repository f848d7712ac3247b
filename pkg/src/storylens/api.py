"""HTTP+JSON service surface consumed by the web studio and batch clients.

One project = one document + registry + analyzer. Reads lazily refresh the
snapshot (cheap thanks to paragraph caching); every error body is
``{"code", "message", "field"?}``.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import errors
from .analytics import (
    EmbeddingTable,
    bin_sentence_ranges,
    candidate_pairs,
    impact_graph,
    timeline,
    word_zone,
)
from .incremental import Analyzer, AnalysisSnapshot
from .project import Project, Settings, load_project, save_project
from .registry import GroupKey
from .report import edge_json, pair_json, subject_to_json, timeline_row_json, word_zone_entry_json


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, field_: str | None = None):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.field = field_


_DOMAIN_STATUS = [
    (errors.UnknownEntity, 404, "unknown_entity"),
    (errors.DuplicateAlias, 409, "duplicate_alias"),
    (errors.SelfMerge, 422, "self_merge"),
    (errors.UnknownDimension, 422, "unknown_dimension"),
    (errors.SpanOutOfRange, 422, "span_out_of_range"),
    (errors.UnknownPosClass, 422, "unknown_pos_class"),
    (errors.NoEligibleSubjects, 409, "no_eligible_subjects"),
    (errors.MalformedDelta, 422, "malformed_delta"),
]


@dataclass
class ProjectState:
    project: Project
    analyzer: Analyzer
    lock: threading.Lock = field(default_factory=threading.Lock)

    def snapshot(self) -> AnalysisSnapshot:
        return self.analyzer.analyze(self.project.document)


class ProjectStore:
    """In-memory project map, optionally mirrored to a data directory."""

    def __init__(self, data_dir: str | Path | None = None, embeddings: EmbeddingTable | None = None):
        self.data_dir = Path(data_dir) if data_dir else None
        self.embeddings = embeddings
        self._items: dict[str, ProjectState] = {}
        if self.data_dir is not None:
            self.data_dir.mkdir(parents=True, exist_ok=True)
            for path in sorted(self.data_dir.glob("*.json")):
                project = load_project(path)
                self._items[project.id] = ProjectState(project, Analyzer(project.registry))

    def create(self, title: str, document: str) -> ProjectState:
        project = Project.new(title=title, document=document)
        state = ProjectState(project, Analyzer(project.registry))
        self._items[project.id] = state
        self.persist(state)
        return state

    def get(self, project_id: str) -> ProjectState:
        state = self._items.get(project_id)
        if state is None:
            raise ApiError(404, "unknown_project", f"no project {project_id!r}")
        return state

    def delete(self, project_id: str) -> None:
        self.get(project_id)
        del self._items[project_id]
        if self.data_dir is not None:
            path = self.data_dir / f"{project_id}.json"
            if path.exists():
                path.unlink()

    def list_states(self) -> list[ProjectState]:
        return list(self._items.values())

    def persist(self, state: ProjectState) -> None:
        if self.data_dir is not None:
            save_project(state.project, self.data_dir / f"{state.project.id}.json")


# -- request bodies -----------------------------------------------------------


class CreateProjectBody(BaseModel):
    title: str = "Untitled"
    document: str = ""


class UpdateProjectBody(BaseModel):
    title: str | None = None
    document: str | None = None
    settings: dict | None = None


class AnalyzeBody(BaseModel):
    document: str
    delta: list[dict] | None = None


class MergeBody(BaseModel):
    target: str
    source: str


class ManualBody(BaseModel):
    surface: str
    start: int
    end: int


class DemographicsBody(BaseModel):
    dimension: str
    category: str | None = None


class SchemaBody(BaseModel):
    dimension: str
    category: str | None = None


def _record_json(rec) -> dict:
    return {
        "id": rec.id,
        "name": rec.canonical_name,
        "aliases": sorted(rec.aliases),
        "demographics": dict(sorted(rec.demographics.items())),
        "manually_added": rec.manually_added,
    }


def _parse_subject(raw: str):
    raw = raw.strip()
    if raw.startswith("{"):
        try:
            return GroupKey.from_dict(json.loads(raw))
        except (json.JSONDecodeError, ValueError) as exc:
            raise ApiError(422, "validation_error", f"bad group key: {exc}", "subject")
    return raw


def _parse_subject_list(raw: str | None) -> list | None:
    if raw is None or not raw.strip():
        return None
    text = raw.strip()
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        return [part.strip() for part in text.split(",") if part.strip()]
    if not isinstance(data, list):
        raise ApiError(422, "validation_error", "expected a JSON list", "subjects")
    out = []
    for item in data:
        if isinstance(item, str):
            out.append(item)
        elif isinstance(item, dict):
            try:
                out.append(GroupKey.from_dict(item))
            except ValueError as exc:
                raise ApiError(422, "validation_error", str(exc), "subjects")
        else:
            raise ApiError(422, "validation_error", f"bad subject {item!r}", "subjects")
    return out


def create_app(store: ProjectStore | None = None) -> FastAPI:
    store = store if store is not None else ProjectStore()
    app = FastAPI(title="storylens", version="0.1.0")
    app.state.store = store

    @app.exception_handler(ApiError)
    async def _api_error(_req: Request, exc: ApiError):
        body = {"code": exc.code, "message": exc.message}
        if exc.field:
            body["field"] = exc.field
        return JSONResponse(status_code=exc.status, content=body)

    @app.exception_handler(errors.StorylensError)
    async def _domain_error(_req: Request, exc: errors.StorylensError):
        for klass, status, code in _DOMAIN_STATUS:
            if isinstance(exc, klass):
                return JSONResponse(
                    status_code=status, content={"code": code, "message": str(exc)}
                )
        return JSONResponse(
            status_code=500, content={"code": "internal", "message": str(exc)}
        )

    @app.exception_handler(RequestValidationError)
    async def _validation_error(_req: Request, exc: RequestValidationError):
        first = exc.errors()[0] if exc.errors() else {}
        field_ = ".".join(str(p) for p in first.get("loc", []) if p != "body")
        return JSONResponse(
            status_code=422,
            content={
                "code": "validation_error",
                "message": first.get("msg", "invalid request"),
                "field": field_ or None,
            },
        )

    @app.exception_handler(ValueError)
    async def _value_error(_req: Request, exc: ValueError):
        return JSONResponse(
            status_code=422, content={"code": "validation_error", "message": str(exc)}
        )

    # -- projects -------------------------------------------------------------

    @app.post("/projects", status_code=201)
    def create_project(body: CreateProjectBody):
        state = store.create(body.title, body.document)
        return _project_json(state)

    @app.get("/projects")
    def list_projects():
        return {
            "projects": [
                {"id": s.project.id, "title": s.project.title}
                for s in store.list_states()
            ]
        }

    @app.get("/projects/{pid}")
    def get_project(pid: str):
        return _project_json(store.get(pid))

    @app.put("/projects/{pid}")
    def update_project(pid: str, body: UpdateProjectBody):
        state = store.get(pid)
        with state.lock:
            if body.title is not None:
                state.project.title = body.title
            if body.document is not None:
                state.project.document = body.document
            if body.settings is not None:
                known = set(Settings.__dataclass_fields__)
                unknown = set(body.settings) - known
                if unknown:
                    raise ApiError(
                        422, "validation_error", f"unknown settings {sorted(unknown)}", "settings"
                    )
                merged = Settings(
                    **{**state.project.settings.__dict__, **body.settings}
                )
                merged.validate()
                state.project.settings = merged
            store.persist(state)
        return _project_json(state)

    @app.delete("/projects/{pid}", status_code=204)
    def delete_project(pid: str):
        store.delete(pid)

    def _project_json(state: ProjectState) -> dict:
        p = state.project
        return {
            "id": p.id,
            "title": p.title,
            "document": p.document,
            "settings": dict(p.settings.__dict__),
            "format_version": p.format_version,
        }

    # -- analysis ---------------------------------------------------------------

    @app.post("/projects/{pid}/analyze")
    def analyze(pid: str, body: AnalyzeBody):
        state = store.get(pid)
        with state.lock:
            state.project.document = body.document
            snapshot = state.analyzer.analyze(body.document, body.delta)
            new_characters = [
                {"id": cid, "name": state.project.registry.display_name(cid)}
                for cid in state.analyzer.last_promoted
            ]
            store.persist(state)
        return {
            "snapshot_version": snapshot.snapshot_version,
            "S": snapshot.S,
            "new_characters": new_characters,
        }

    # -- characters -------------------------------------------------------------

    @app.get("/projects/{pid}/characters")
    def characters(pid: str):
        state = store.get(pid)
        with state.lock:
            state.snapshot()  # pick up characters from the current document
            records = sorted(
                state.project.registry.live_records(), key=lambda r: r.canonical_name
            )
            return {
                "characters": [_record_json(r) for r in records],
                "schema": state.project.registry.schema.to_dict(),
            }

    @app.post("/projects/{pid}/characters/merge")
    def merge(pid: str, body: MergeBody):
        state = store.get(pid)
        with state.lock:
            record = state.project.registry.merge(body.target, body.source)
            store.persist(state)
            return _record_json(record)

    @app.delete("/projects/{pid}/characters/{cid}")
    def delete_character(pid: str, cid: str):
        state = store.get(pid)
        with state.lock:
            state.project.registry.delete(cid)
            store.persist(state)
        return {"deleted": cid}

    @app.post("/projects/{pid}/characters/manual", status_code=201)
    def add_manual(pid: str, body: ManualBody):
        state = store.get(pid)
        with state.lock:
            doc = state.project.document
            if not 0 <= body.start < body.end <= len(doc):
                raise errors.SpanOutOfRange(f"({body.start}, {body.end})")
            if doc[body.start : body.end] != body.surface:
                raise ApiError(
                    422,
                    "surface_mismatch",
                    "span text does not equal the given surface",
                    "surface",
                )
            record = state.project.registry.add_manual(body.surface)
            store.persist(state)
            return _record_json(record)

    @app.put("/projects/{pid}/characters/{cid}/demographics")
    def assign_demographics(pid: str, cid: str, body: DemographicsBody):
        state = store.get(pid)
        with state.lock:
            record = state.project.registry.assign_demographic(
                cid, body.dimension, body.category
            )
            store.persist(state)
            return _record_json(record)

    @app.post("/projects/{pid}/schema")
    def extend_schema(pid: str, body: SchemaBody):
        state = store.get(pid)
        with state.lock:
            state.project.registry.extend_schema(body.dimension, body.category)
            store.persist(state)
            return state.project.registry.schema.to_dict()

    # -- analytics ---------------------------------------------------------------

    @app.get("/projects/{pid}/timeline")
    def get_timeline(
        pid: str,
        mode: str = "characters",
        dimension: str | None = None,
        groups: str | None = None,
        order: str | None = None,
        aggregate: str | None = None,
    ):
        state = store.get(pid)
        with state.lock:
            settings = state.project.settings
            order = order or settings.sort_order
            aggregate = aggregate or settings.aggregate_mode
            group_keys = _parse_subject_list(groups)
            if group_keys is not None and any(not isinstance(g, GroupKey) for g in group_keys):
                raise ApiError(422, "validation_error", "groups must be group objects", "groups")
            snapshot = state.snapshot()
            registry = state.project.registry
            rows = timeline(
                snapshot,
                registry,
                mode=mode,
                dimension=dimension,
                groups=group_keys,
                order=order,
                aggregate=aggregate,
            )
            return {
                "snapshot_version": snapshot.snapshot_version,
                "S": snapshot.S,
                "mode": mode,
                "order": order.upper(),
                "aggregate": aggregate.upper(),
                "bins": [[a, b] for a, b in bin_sentence_ranges(snapshot.S, aggregate)],
                "rows": [timeline_row_json(r, registry) for r in rows],
            }

    @app.get("/projects/{pid}/impact/{subject}")
    def get_impact(pid: str, subject: str, min: int | None = None, groups: str | None = None):
        state = store.get(pid)
        with state.lock:
            snapshot = state.snapshot()
            registry = state.project.registry
            focus = _parse_subject(subject)
            universe = _parse_subject_list(groups)
            min_count = min if min is not None else state.project.settings.min_edge_count
            edges = impact_graph(snapshot, registry, focus, min_count, universe)
            nodes = {focus} | {e.a for e in edges} | {e.b for e in edges}
            return {
                "snapshot_version": snapshot.snapshot_version,
                "focus": subject_to_json(focus, registry),
                "min_count": min_count,
                "nodes": [
                    subject_to_json(n, registry)
                    for n in sorted(nodes, key=lambda s: repr(s))
                ],
                "edges": [edge_json(e, registry) for e in edges],
            }

    @app.get("/projects/{pid}/wordzones")
    def get_wordzones(
        pid: str, subjects: str | None = None, pos: str = "BOTH", k: int | None = None
    ):
        state = store.get(pid)
        with state.lock:
            snapshot = state.snapshot()
            registry = state.project.registry
            parsed = _parse_subject_list(subjects)
            if parsed is None:
                raise ApiError(422, "validation_error", "subjects is required", "subjects")
            k = k if k is not None else state.project.settings.word_zone_k
            entries = word_zone(snapshot, registry, parsed, pos, k)
            return {
                "snapshot_version": snapshot.snapshot_version,
                "pos": pos.upper(),
                "k": k,
                "entries": [word_zone_entry_json(e, registry) for e in entries],
            }

    @app.get("/projects/{pid}/candidates")
    def get_candidates(pid: str, top_n: int | None = None):
        state = store.get(pid)
        if store.embeddings is None:
            raise ApiError(
                409,
                "no_embedding_table",
                "no embedding table configured; start the server with --embeddings",
            )
        with state.lock:
            snapshot = state.snapshot()
            registry = state.project.registry
            top_n = top_n if top_n is not None else state.project.settings.top_n_pairs
            subjects = list(snapshot.mentions)
            pairs = candidate_pairs(snapshot, registry, store.embeddings, subjects, top_n)
            return {
                "snapshot_version": snapshot.snapshot_version,
                "top_n": top_n,
                "pairs": [pair_json(p, registry) for p in pairs],
            }

    @app.get("/projects/{pid}/passage")
    def get_passage(pid: str, bin: int, aggregate: str | None = None):
        state = store.get(pid)
        with state.lock:
            snapshot = state.snapshot()
            aggregate = aggregate or state.project.settings.aggregate_mode
            ranges = bin_sentence_ranges(snapshot.S, aggregate)
            if not 0 <= bin < len(ranges):
                raise ApiError(422, "validation_error", f"bin {bin} out of range", "bin")
            first_s, last_s = ranges[bin]
            start = snapshot.sentence_spans[first_s - 1].start
            end = snapshot.sentence_spans[last_s - 1].end
            return {
                "snapshot_version": snapshot.snapshot_version,
                "bin": bin,
                "sentences": [first_s, last_s],
                "start": start,
                "end": end,
                "text": state.project.document[start:end],
            }

    return app
