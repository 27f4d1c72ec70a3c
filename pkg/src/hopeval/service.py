"""HTTP facade over a directory of project files.

All bodies are the same canonical JSON the project files use. Mutations go
through optimistic concurrency: every project carries a revision counter,
writers send the revision they saw in the ``X-Expected-Revision`` header,
and a mismatch is rejected with the current value so the client can reload.
Accepted mutations are persisted before the response is sent.
"""

from __future__ import annotations

import json
import os
import sys
import threading
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterator, Mapping

from fastapi import FastAPI, Request, Response

from .core import (
    COUNTING_SIDES,
    AnnotationProject,
    ErrorAnnotation,
    SegmentCategory,
    TranslationUnit,
    classify_segment,
    epptu,
)
from .errors import (
    NotFoundError,
    ProjectFormatError,
    ProjectValidationError,
    RevisionConflictError,
    UnknownEngineError,
)
from .ingest import (
    PROJECT_SUFFIX,
    Violation,
    canonical_json,
    decode_annotation,
    load_project,
    save_project,
    utc_now,
    validate_project,
)
from .report import REPORT_FORMATS, build_comparison, render_report

DEFAULT_LISTEN = "127.0.0.1:8765"
LISTEN_ENV = "HOPE_LISTEN"
PROJECTS_DIR_ENV = "HOPE_PROJECTS_DIR"
REVISION_HEADER = "X-Expected-Revision"

MAX_PAGE_SIZE = 500
DEFAULT_PAGE_SIZE = 100


def resolve_listen(flag: str | None, env: Mapping[str, str] = os.environ) -> str:
    # Explicit flag wins, then environment, then loopback default.
    return flag or env.get(LISTEN_ENV) or DEFAULT_LISTEN


def resolve_projects_dir(flag: str | None, env: Mapping[str, str] = os.environ) -> str:
    return flag or env.get(PROJECTS_DIR_ENV) or "."


def split_listen(listen: str) -> tuple[str, int]:
    host, _, port = listen.rpartition(":")
    if not host or not port.isdigit():
        raise ValueError(f"listen address must be host:port, got {listen!r}")
    return host, int(port)


@dataclass
class PutResult:
    new_revision: int
    epptu: int
    category: SegmentCategory


class _Entry:
    def __init__(self, project: AnnotationProject, path: Path):
        self.project = project
        self.path = path
        self.revision = 0
        self.lock = threading.Lock()


class ProjectStore:
    """In-memory view of every valid ``.hope`` file in one directory.

    Unloadable or invalid files are skipped with a warning so one bad file
    cannot take the service down. Mutations to a project are serialized
    behind its lock and written through to disk before the revision bumps.
    """

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)
        self._entries: dict[str, _Entry] = {}
        for path in sorted(self.directory.glob("*" + PROJECT_SUFFIX)):
            try:
                project = load_project(path)
            except ProjectFormatError as exc:
                print(f"skipping {path}: {exc}", file=sys.stderr)
                continue
            violations = validate_project(project)
            if violations:
                print(
                    f"skipping {path}: {len(violations)} validation violation(s), "
                    f"first: {violations[0]}",
                    file=sys.stderr,
                )
                continue
            if project.project_id in self._entries:
                print(
                    f"skipping {path}: duplicate project id {project.project_id!r}",
                    file=sys.stderr,
                )
                continue
            self._entries[project.project_id] = _Entry(project, path)

    def project_ids(self) -> list[str]:
        return sorted(self._entries)

    def _entry(self, project_id: str) -> _Entry:
        entry = self._entries.get(project_id)
        if entry is None:
            raise NotFoundError(f"project not found: {project_id!r}")
        return entry

    @contextmanager
    def read(self, project_id: str) -> Iterator[tuple[AnnotationProject, int]]:
        """Consistent snapshot: holds the project's lock while rendering."""
        entry = self._entry(project_id)
        with entry.lock:
            yield entry.project, entry.revision

    def put_annotations(
        self,
        project_id: str,
        unit_id: str,
        engine_id: str,
        annotations: list[ErrorAnnotation],
        expected_revision: int,
    ) -> PutResult:
        """Replace one unit's annotation list for one engine, atomically.

        Raises NotFoundError / UnknownEngineError for unknown addressees,
        RevisionConflictError on a stale expected revision, and
        ProjectValidationError when the annotations break span bounds or
        target the wrong engine; none of these leave any state change.
        """
        entry = self._entry(project_id)
        with entry.lock:
            project = entry.project
            unit = project.unit_by_id(unit_id)
            if unit is None:
                raise NotFoundError(f"unit not found: {unit_id!r}")
            if not project.has_engine(engine_id):
                raise UnknownEngineError(engine_id)
            if expected_revision != entry.revision:
                raise RevisionConflictError(expected_revision, entry.revision)
            _check_annotations(unit, engine_id, annotations)

            had_key = engine_id in unit.annotations
            previous = unit.annotations.get(engine_id)
            previous_modified = project.modified_at
            unit.annotations[engine_id] = list(annotations)
            project.modified_at = utc_now()
            try:
                save_project(project, entry.path)
            except BaseException:
                if had_key:
                    unit.annotations[engine_id] = previous
                else:
                    del unit.annotations[engine_id]
                project.modified_at = previous_modified
                raise
            entry.revision += 1
            value = epptu(annotations)
            return PutResult(entry.revision, value, classify_segment(value))


def _check_annotations(
    unit: TranslationUnit, engine_id: str, annotations: list[ErrorAnnotation]
) -> None:
    violations = []
    target = unit.targets.get(engine_id)
    if target is None:
        violations.append(
            Violation(
                "dangling-target",
                f"unit has no target text for engine {engine_id!r}",
                unit_id=unit.id,
                engine_id=engine_id,
            )
        )
    for position, ann in enumerate(annotations):
        if ann.span is None:
            continue
        start, end = ann.span
        if start >= end:
            violations.append(
                Violation(
                    "span-order",
                    f"annotation {position}: span start {start} must be below end {end}",
                    unit_id=unit.id,
                    engine_id=engine_id,
                )
            )
        elif start < 0 or (target is not None and end > len(target)):
            violations.append(
                Violation(
                    "span-bounds",
                    f"annotation {position}: span ({start}, {end}) exceeds target "
                    f"length {len(target) if target is not None else 0}",
                    unit_id=unit.id,
                    engine_id=engine_id,
                )
            )
    if violations:
        raise ProjectValidationError(violations)


# --- document shapes ------------------------------------------------------


def _annotation_payload(ann: ErrorAnnotation) -> dict[str, Any]:
    return {
        "error_type": ann.error_type.code,
        "severity": ann.severity.label,
        "note": ann.note,
        "span": list(ann.span) if ann.span is not None else None,
        "annotator_id": ann.annotator_id,
    }


def _unit_summary(unit: TranslationUnit, engine_ids: list[str]) -> dict[str, Any]:
    engines = {}
    for engine_id in engine_ids:
        annotations = unit.annotations.get(engine_id)
        value = epptu(annotations or [])
        engines[engine_id] = {
            "epptu": value,
            "category": classify_segment(value).label,
            "annotated": annotations is not None,
            "annotations": [_annotation_payload(a) for a in annotations or []],
        }
    return {
        "id": unit.id,
        "source": unit.source,
        "targets": {k: unit.targets[k] for k in sorted(unit.targets)},
        "post_edited": {k: unit.post_edited[k] for k in sorted(unit.post_edited)},
        "engines": engines,
    }


def _json_response(document: Any, status_code: int = 200) -> Response:
    return Response(
        content=canonical_json(document),
        status_code=status_code,
        media_type="application/json",
    )


def _error_response(status_code: int, code: str, message: str, **extra: Any) -> Response:
    return _json_response(
        {"error": {"code": code, "message": message, **extra}}, status_code
    )


def create_app(store: ProjectStore) -> FastAPI:
    app = FastAPI(title="hopeval", docs_url=None, redoc_url=None)

    @app.get("/healthz")
    def healthz() -> Response:
        return _json_response({"status": "ok"})

    @app.get("/projects")
    def list_projects() -> Response:
        projects = []
        for project_id in store.project_ids():
            with store.read(project_id) as (project, revision):
                projects.append(
                    {
                        "project_id": project.project_id,
                        "name": project.name,
                        "source_lang": project.source_lang,
                        "target_lang": project.target_lang,
                        "engines": project.engine_ids(),
                        "units": len(project.units),
                        "revision": revision,
                    }
                )
        return _json_response({"projects": projects})

    @app.get("/projects/{project_id}/units")
    def list_units(
        project_id: str, cursor: str = "0", page_size: int = DEFAULT_PAGE_SIZE
    ) -> Response:
        if not 1 <= page_size <= MAX_PAGE_SIZE:
            return _error_response(
                400, "bad-page-size", f"page_size must be 1..{MAX_PAGE_SIZE}, got {page_size}"
            )
        try:
            with store.read(project_id) as (project, revision):
                try:
                    start = int(cursor)
                except ValueError:
                    start = -1
                if start != 0 and not 0 <= start < len(project.units):
                    return _error_response(400, "bad-cursor", f"unknown cursor {cursor!r}")
                end = min(start + page_size, len(project.units))
                engine_ids = project.engine_ids()
                units = [_unit_summary(u, engine_ids) for u in project.units[start:end]]
                document = {
                    "project_id": project.project_id,
                    "revision": revision,
                    "units": units,
                    "next_cursor": str(end) if end < len(project.units) else None,
                }
        except NotFoundError as exc:
            return _error_response(404, "not-found", str(exc))
        return _json_response(document)

    @app.put("/projects/{project_id}/units/{unit_id}/engines/{engine_id}/annotations")
    async def put_annotations(
        project_id: str, unit_id: str, engine_id: str, request: Request
    ) -> Response:
        header = request.headers.get(REVISION_HEADER)
        if header is None or not header.strip().lstrip("-").isdigit():
            return _error_response(
                400, "bad-revision-header",
                f"{REVISION_HEADER} header must carry the revision last seen",
            )
        expected = int(header)
        body = await request.body()
        try:
            annotations = _decode_annotation_body(body)
        except ProjectFormatError as exc:
            return _error_response(
                422, "validation", "annotation body rejected",
                violations=[{"code": "format", "message": str(exc),
                             "unit_id": unit_id, "engine_id": engine_id}],
            )
        try:
            result = store.put_annotations(
                project_id, unit_id, engine_id, annotations, expected
            )
        except (NotFoundError, UnknownEngineError) as exc:
            return _error_response(404, "not-found", str(exc))
        except RevisionConflictError as exc:
            return _error_response(
                409, "revision-conflict", str(exc),
                current_revision=exc.current, expected_revision=exc.expected,
            )
        except ProjectValidationError as exc:
            return _error_response(
                422, "validation", "annotations rejected",
                violations=[
                    {"code": v.code, "message": v.message,
                     "unit_id": v.unit_id, "engine_id": v.engine_id}
                    for v in exc.violations
                ],
            )
        return _json_response(
            {
                "new_revision": result.new_revision,
                "epptu": result.epptu,
                "category": result.category.label,
            }
        )

    @app.get("/projects/{project_id}/report")
    def get_report(
        project_id: str,
        engines: str = "",
        side: str = "source",
        format: str = "machine",
    ) -> Response:
        if side not in COUNTING_SIDES:
            return _error_response(
                400, "bad-side", f"side must be one of {COUNTING_SIDES}, got {side!r}"
            )
        if format not in REPORT_FORMATS:
            return _error_response(
                400, "bad-format",
                f"format must be one of {REPORT_FORMATS}, got {format!r}",
            )
        try:
            with store.read(project_id) as (project, _):
                engine_ids = engines.split(",") if engines else project.engine_ids()
                try:
                    report = build_comparison(
                        project, engine_ids, side, allow_partial=True
                    )
                except UnknownEngineError as exc:
                    return _error_response(400, "bad-engines", str(exc))
                except ValueError as exc:
                    return _error_response(400, "bad-engines", str(exc))
                document = render_report(report, format)
        except NotFoundError as exc:
            return _error_response(404, "not-found", str(exc))
        media = "text/plain; charset=utf-8" if format == "table" else "application/json"
        return Response(content=document, media_type=media)

    return app


_OPTIONAL_ANNOTATION_FIELDS = ("note", "span", "annotator_id")


def _decode_annotation_body(body: bytes) -> list[ErrorAnnotation]:
    try:
        document = json.loads(body)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ProjectFormatError(f"body is not valid JSON: {exc}") from None
    if not isinstance(document, list):
        raise ProjectFormatError("body must be a JSON array of annotations")
    # Clients may omit the optional fields; the file decoder may not.
    items = []
    for item in document:
        if isinstance(item, dict):
            item = {**{f: None for f in _OPTIONAL_ANNOTATION_FIELDS}, **item}
        items.append(item)
    return [
        decode_annotation(item, f"annotations[{n}]") for n, item in enumerate(items)
    ]


def serve(listen: str, projects_dir: str) -> None:
    """Run the service until interrupted; blocking."""
    import uvicorn

    host, port = split_listen(listen)
    store = ProjectStore(projects_dir)
    app = create_app(store)
    uvicorn.run(app, host=host, port=port, log_level="warning")
