"""Corpus import, project persistence, and integrity validation.

Projects persist as canonical JSON documents (extension ``.hope``): UTF-8,
two-space indent, fixed field order with ``schema_version`` first,
engine-keyed maps sorted, newline-terminated. Rendering is a pure function
of the project value, so save -> load -> save is byte-identical. Writes go
through a temp file and an atomic rename; an interrupted save leaves the
previous document intact.
"""

from __future__ import annotations

import json
import os
import tempfile
import uuid
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import IO, Any, Iterable, Union

from .core import (
    AnnotationProject,
    Engine,
    ErrorAnnotation,
    ErrorType,
    Severity,
    TranslationUnit,
)
from .errors import (
    ProjectFormatError,
    ProjectValidationError,
    TsvImportError,
    UnsupportedSchemaError,
)

SCHEMA_VERSION = 1
PROJECT_SUFFIX = ".hope"
_TIME_FORMAT = "%Y-%m-%dT%H:%M:%SZ"


def utc_now() -> datetime:
    """Current UTC time at the second precision the file format stores."""
    return datetime.now(timezone.utc).replace(microsecond=0)


def format_timestamp(value: datetime) -> str:
    return value.strftime(_TIME_FORMAT)


def parse_timestamp(value: str, path: str) -> datetime:
    try:
        parsed = datetime.strptime(value, _TIME_FORMAT)
    except ValueError:
        raise ProjectFormatError(
            f"{path}: expected UTC timestamp like 2024-01-31T12:00:00Z, got {value!r}"
        ) from None
    return parsed.replace(tzinfo=timezone.utc)


@dataclass(frozen=True)
class ColumnMapping:
    """Which TSV columns hold what. Indices are zero-based."""

    source: int
    target_columns: dict[str, int]
    id: int | None = None


@dataclass(frozen=True)
class Violation:
    """One integrity problem found in a project; data, not an exception."""

    code: str
    message: str
    unit_id: str | None = None
    engine_id: str | None = None

    def __str__(self) -> str:
        where = []
        if self.unit_id is not None:
            where.append(f"unit={self.unit_id}")
        if self.engine_id is not None:
            where.append(f"engine={self.engine_id}")
        prefix = f"[{self.code}]"
        if where:
            prefix += " " + " ".join(where)
        return f"{prefix}: {self.message}"


def import_tsv(
    stream: Union[IO[str], Iterable[str]],
    mapping: ColumnMapping,
    *,
    project_id: str | None = None,
    name: str = "",
    source_lang: str = "und",
    target_lang: str = "und",
) -> AnnotationProject:
    """Build a fresh project from a tab-separated bilingual corpus.

    One unit per non-empty row. Cells are kept verbatim (only the line
    terminator is stripped); tabs and newlines inside cells are not
    supported. Without an id column, unit ids are zero-padded row ordinals.
    The first row is treated as a header iff its mapped cells spell the
    declared names: ``id``, ``source``, and each engine id.
    """
    engine_ids = list(mapping.target_columns)
    if not engine_ids:
        raise TsvImportError("mapping declares no engine target columns")
    needed = [mapping.source, *mapping.target_columns.values()]
    if mapping.id is not None:
        needed.append(mapping.id)
    if any(index < 0 for index in needed):
        raise TsvImportError("column indices must be non-negative")
    width = max(needed) + 1

    units: list[TranslationUnit] = []
    seen_ids: dict[str, int] = {}
    ordinal = 0
    for row_number, raw_line in enumerate(stream, start=1):
        line = raw_line.rstrip("\r\n") if raw_line.endswith(("\n", "\r")) else raw_line
        if line == "":
            continue
        cells = line.split("\t")
        if row_number == 1 and _is_header(cells, mapping):
            continue
        if len(cells) < width:
            raise TsvImportError(
                f"expected at least {width} columns, found {len(cells)}",
                row=row_number,
            )
        source = cells[mapping.source]
        if source == "":
            raise TsvImportError("source cell is empty", row=row_number)
        if mapping.id is not None:
            unit_id = cells[mapping.id]
            if unit_id == "":
                raise TsvImportError("id cell is empty", row=row_number)
            if unit_id in seen_ids:
                raise TsvImportError(
                    f"duplicate unit id {unit_id!r} (first seen on row {seen_ids[unit_id]})",
                    row=row_number,
                )
            seen_ids[unit_id] = row_number
        else:
            ordinal += 1
            unit_id = f"{ordinal:06d}"
        targets = {engine: cells[index] for engine, index in mapping.target_columns.items()}
        units.append(TranslationUnit(id=unit_id, source=source, targets=targets))

    now = utc_now()
    return AnnotationProject(
        project_id=project_id or uuid.uuid4().hex,
        name=name,
        source_lang=source_lang,
        target_lang=target_lang,
        engines=[Engine(engine_id=e) for e in engine_ids],
        units=units,
        created_at=now,
        modified_at=now,
    )


def _is_header(cells: list[str], mapping: ColumnMapping) -> bool:
    try:
        if cells[mapping.source] != "source":
            return False
        if mapping.id is not None and cells[mapping.id] != "id":
            return False
        return all(
            cells[index] == engine for engine, index in mapping.target_columns.items()
        )
    except IndexError:
        return False


def validate_project(project: AnnotationProject) -> list[Violation]:
    """Collect every invariant violation; an empty list means valid."""
    violations: list[Violation] = []

    if project.schema_version != SCHEMA_VERSION:
        violations.append(
            Violation("schema", f"schema_version must be {SCHEMA_VERSION}, got {project.schema_version}")
        )
    if not project.project_id:
        violations.append(Violation("project-id", "project_id is empty"))

    for label, stamp in (("created_at", project.created_at), ("modified_at", project.modified_at)):
        if stamp.tzinfo is None or stamp.utcoffset() != timezone.utc.utcoffset(None):
            violations.append(Violation("timestamp", f"{label} must be UTC"))
        elif stamp.microsecond != 0:
            violations.append(Violation("timestamp", f"{label} must have second precision"))

    engine_ids = set()
    for engine in project.engines:
        if not engine.engine_id:
            violations.append(Violation("engine-id", "engine_id is empty"))
        elif engine.engine_id in engine_ids:
            violations.append(
                Violation("duplicate-engine", f"engine id {engine.engine_id!r} registered twice",
                          engine_id=engine.engine_id)
            )
        else:
            engine_ids.add(engine.engine_id)

    unit_ids = set()
    for unit in project.units:
        if not unit.id:
            violations.append(Violation("unit-id", "unit id is empty"))
        elif unit.id in unit_ids:
            violations.append(
                Violation("duplicate-unit", f"unit id {unit.id!r} appears twice", unit_id=unit.id)
            )
        else:
            unit_ids.add(unit.id)

        for field_name, keyed in (("post_edited", unit.post_edited), ("annotations", unit.annotations)):
            for engine_id in keyed:
                if engine_id not in unit.targets:
                    violations.append(
                        Violation(
                            "dangling-target",
                            f"{field_name} keyed by engine {engine_id!r} which has no target text",
                            unit_id=unit.id,
                            engine_id=engine_id,
                        )
                    )

        for engine_id, annotations in unit.annotations.items():
            if engine_id not in engine_ids:
                violations.append(
                    Violation(
                        "unregistered-engine",
                        f"annotations reference engine {engine_id!r} which is not registered",
                        unit_id=unit.id,
                        engine_id=engine_id,
                    )
                )
            target = unit.targets.get(engine_id)
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
                            f"annotation {position}: span ({start}, {end}) exceeds target length "
                            f"{len(target) if target is not None else 0}",
                            unit_id=unit.id,
                            engine_id=engine_id,
                        )
                    )

    return violations


# --- canonical rendering -------------------------------------------------


def _annotation_doc(ann: ErrorAnnotation) -> dict[str, Any]:
    return {
        "error_type": ann.error_type.code,
        "severity": ann.severity.label,
        "note": ann.note,
        "span": list(ann.span) if ann.span is not None else None,
        "annotator_id": ann.annotator_id,
    }


def _unit_doc(unit: TranslationUnit) -> dict[str, Any]:
    return {
        "id": unit.id,
        "source": unit.source,
        "targets": {k: unit.targets[k] for k in sorted(unit.targets)},
        "post_edited": {k: unit.post_edited[k] for k in sorted(unit.post_edited)},
        "annotations": {
            k: [_annotation_doc(a) for a in unit.annotations[k]]
            for k in sorted(unit.annotations)
        },
    }


def project_document(project: AnnotationProject) -> dict[str, Any]:
    """Plain-data mirror of the project in canonical field order."""
    return {
        "schema_version": project.schema_version,
        "project_id": project.project_id,
        "name": project.name,
        "source_lang": project.source_lang,
        "target_lang": project.target_lang,
        "created_at": format_timestamp(project.created_at),
        "modified_at": format_timestamp(project.modified_at),
        "engines": [
            {
                "engine_id": e.engine_id,
                "display_name": e.display_name,
                "description": e.description,
            }
            for e in project.engines
        ],
        "units": [_unit_doc(u) for u in project.units],
    }


def canonical_json(document: Any) -> str:
    """The one rendering used for project files and service bodies."""
    return json.dumps(document, ensure_ascii=False, indent=2) + "\n"


def render_project(project: AnnotationProject) -> str:
    return canonical_json(project_document(project))


def save_project(project: AnnotationProject, destination: Union[str, Path]) -> None:
    """Validate, render, and atomically write the project document."""
    violations = validate_project(project)
    if violations:
        raise ProjectValidationError(violations)
    path = Path(destination)
    payload = render_project(project).encode("utf-8")
    fd, tmp_name = tempfile.mkstemp(
        prefix=path.name + ".", suffix=".tmp", dir=path.parent
    )
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(payload)
            handle.flush()
            os.fsync(handle.fileno())
        os.replace(tmp_name, path)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except OSError:
            pass
        raise


# --- strict decoding ------------------------------------------------------


def _expect(value: Any, kind: type, path: str) -> Any:
    if kind is bool and isinstance(value, bool):
        return value
    if kind is int and (not isinstance(value, int) or isinstance(value, bool)):
        raise ProjectFormatError(f"{path}: expected integer, got {type(value).__name__}")
    if kind is not int and not isinstance(value, kind):
        raise ProjectFormatError(
            f"{path}: expected {kind.__name__}, got {type(value).__name__}"
        )
    return value


def _expect_obj(value: Any, path: str, fields: tuple[str, ...]) -> dict[str, Any]:
    obj = _expect(value, dict, path)
    missing = [f for f in fields if f not in obj]
    extra = [k for k in obj if k not in fields]
    if missing:
        raise ProjectFormatError(f"{path}: missing field(s) {', '.join(missing)}")
    if extra:
        raise ProjectFormatError(f"{path}: unknown field(s) {', '.join(extra)}")
    return obj


def decode_annotation(value: Any, path: str) -> ErrorAnnotation:
    obj = _expect_obj(value, path, ("error_type", "severity", "note", "span", "annotator_id"))
    try:
        error_type = ErrorType.from_code(_expect(obj["error_type"], str, f"{path}.error_type"))
        severity = Severity.from_label(_expect(obj["severity"], str, f"{path}.severity"))
    except ValueError as exc:
        raise ProjectFormatError(f"{path}: {exc}") from None
    note = obj["note"]
    if note is not None:
        note = _expect(note, str, f"{path}.note")
    span = obj["span"]
    if span is not None:
        span = _expect(span, list, f"{path}.span")
        if len(span) != 2:
            raise ProjectFormatError(f"{path}.span: expected [start, end]")
        span = (_expect(span[0], int, f"{path}.span[0]"), _expect(span[1], int, f"{path}.span[1]"))
    annotator = obj["annotator_id"]
    if annotator is not None:
        annotator = _expect(annotator, str, f"{path}.annotator_id")
    return ErrorAnnotation(error_type, severity, note=note, span=span, annotator_id=annotator)


def _decode_str_map(value: Any, path: str) -> dict[str, str]:
    obj = _expect(value, dict, path)
    return {
        _expect(k, str, f"{path} key"): _expect(v, str, f"{path}.{k}")
        for k, v in obj.items()
    }


def _decode_unit(value: Any, path: str) -> TranslationUnit:
    obj = _expect_obj(value, path, ("id", "source", "targets", "post_edited", "annotations"))
    annotations_obj = _expect(obj["annotations"], dict, f"{path}.annotations")
    annotations: dict[str, list[ErrorAnnotation]] = {}
    for engine_id, items in annotations_obj.items():
        items = _expect(items, list, f"{path}.annotations.{engine_id}")
        annotations[engine_id] = [
            decode_annotation(item, f"{path}.annotations.{engine_id}[{n}]")
            for n, item in enumerate(items)
        ]
    return TranslationUnit(
        id=_expect(obj["id"], str, f"{path}.id"),
        source=_expect(obj["source"], str, f"{path}.source"),
        targets=_decode_str_map(obj["targets"], f"{path}.targets"),
        post_edited=_decode_str_map(obj["post_edited"], f"{path}.post_edited"),
        annotations=annotations,
    )


def decode_project(document: Any) -> AnnotationProject:
    """Turn a parsed document back into a project, strictly."""
    if not isinstance(document, dict):
        raise ProjectFormatError("project document must be an object")
    version = document.get("schema_version")
    if version != SCHEMA_VERSION:
        raise UnsupportedSchemaError(
            f"unsupported schema_version {version!r}; this build reads version {SCHEMA_VERSION}"
        )
    obj = _expect_obj(
        document,
        "project",
        (
            "schema_version",
            "project_id",
            "name",
            "source_lang",
            "target_lang",
            "created_at",
            "modified_at",
            "engines",
            "units",
        ),
    )
    engines = []
    for n, item in enumerate(_expect(obj["engines"], list, "engines")):
        engine_obj = _expect_obj(item, f"engines[{n}]", ("engine_id", "display_name", "description"))
        engines.append(
            Engine(
                engine_id=_expect(engine_obj["engine_id"], str, f"engines[{n}].engine_id"),
                display_name=_expect(engine_obj["display_name"], str, f"engines[{n}].display_name"),
                description=_expect(engine_obj["description"], str, f"engines[{n}].description"),
            )
        )
    units = [
        _decode_unit(item, f"units[{n}]")
        for n, item in enumerate(_expect(obj["units"], list, "units"))
    ]
    return AnnotationProject(
        schema_version=SCHEMA_VERSION,
        project_id=_expect(obj["project_id"], str, "project_id"),
        name=_expect(obj["name"], str, "name"),
        source_lang=_expect(obj["source_lang"], str, "source_lang"),
        target_lang=_expect(obj["target_lang"], str, "target_lang"),
        created_at=parse_timestamp(_expect(obj["created_at"], str, "created_at"), "created_at"),
        modified_at=parse_timestamp(_expect(obj["modified_at"], str, "modified_at"), "modified_at"),
        engines=engines,
        units=units,
    )


def load_project(source: Union[str, Path, IO[str]]) -> AnnotationProject:
    """Read and decode a project document; any structural error aborts."""
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as handle:
            text = handle.read()
    else:
        text = source.read()
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProjectFormatError(
            f"malformed project document at line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from None
    return decode_project(document)
