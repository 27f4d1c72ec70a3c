"""Engine comparison reports and their three renderings.

``machine`` and ``plot_data`` are canonical JSON (same conventions as
project files); ``table`` is aligned plain text and treated as a stable
format. A report renders identically wherever it is produced: the
timestamp is the project's own ``modified_at``, never the wall clock.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import datetime
from fractions import Fraction
from typing import Any, Mapping, Sequence

from .core import (
    COUNTING_SIDES,
    AnnotationProject,
    ErrorType,
    QualityProfile,
    SegmentCategory,
    Severity,
    aggregate,
)
from .errors import IncompleteAnnotationError
from .ingest import canonical_json, format_timestamp, parse_timestamp

REPORT_FORMATS = ("machine", "table", "plot_data")


@dataclass(frozen=True)
class EngineDeltas:
    """Differences between two profiles, first engine minus second."""

    engine_a: str
    engine_b: str
    epp_delta: int
    segment_category_deltas: dict[SegmentCategory, int]
    word_category_deltas: dict[SegmentCategory, int]


@dataclass(frozen=True)
class ComparisonReport:
    project_id: str
    counting_side: str
    profiles: tuple[QualityProfile, ...]
    deltas: tuple[EngineDeltas, ...]
    generated_at: datetime
    partial: bool


def rounded_percentages(counts: Sequence[int]) -> list[float] | None:
    """Shares of the total, one decimal, summing to exactly 100.0.

    Largest-remainder rounding in tenths of a percent; ties go to the
    earlier position. None when the total is zero (nothing to share).
    """
    total = sum(counts)
    if total == 0:
        return None
    shares = [Fraction(c * 1000, total) for c in counts]
    tenths = [int(s) for s in shares]
    order = sorted(range(len(counts)), key=lambda i: (tenths[i] - shares[i], i))
    for i in order[: 1000 - sum(tenths)]:
        tenths[i] += 1
    return [t / 10 for t in tenths]


def category_percentages(
    counts: Mapping[SegmentCategory, int],
) -> dict[SegmentCategory, float] | None:
    values = rounded_percentages([counts.get(c, 0) for c in SegmentCategory])
    if values is None:
        return None
    return dict(zip(SegmentCategory, values))


def build_comparison(
    project: AnnotationProject,
    engine_ids: Sequence[str],
    counting_side: str = "source",
    *,
    allow_partial: bool = False,
) -> ComparisonReport:
    """Profile the listed engines and compute pairwise deltas.

    Accepts a single engine (a report without deltas); ``compare_engines``
    is the strict two-plus entry point. Engines keep their input order.
    """
    if not engine_ids:
        raise ValueError("engine_ids must name at least one engine")
    if len(set(engine_ids)) != len(engine_ids):
        raise ValueError("engine_ids must be distinct")
    if counting_side not in COUNTING_SIDES:
        raise ValueError(
            f"counting_side must be one of {COUNTING_SIDES}, got {counting_side!r}"
        )

    profiles = tuple(aggregate(project, e, counting_side) for e in engine_ids)
    missing = {p.engine_id: p.unannotated_units for p in profiles if p.unannotated_units}
    if missing and not allow_partial:
        raise IncompleteAnnotationError(missing)

    deltas = []
    for i, a in enumerate(profiles):
        for b in profiles[i + 1 :]:
            deltas.append(
                EngineDeltas(
                    engine_a=a.engine_id,
                    engine_b=b.engine_id,
                    epp_delta=a.total_epp - b.total_epp,
                    segment_category_deltas={
                        c: a.segment_counts[c] - b.segment_counts[c]
                        for c in SegmentCategory
                    },
                    word_category_deltas={
                        c: a.word_counts[c] - b.word_counts[c]
                        for c in SegmentCategory
                    },
                )
            )

    return ComparisonReport(
        project_id=project.project_id,
        counting_side=counting_side,
        profiles=profiles,
        deltas=tuple(deltas),
        generated_at=project.modified_at,
        partial=bool(missing),
    )


def compare_engines(
    project: AnnotationProject,
    engine_ids: Sequence[str],
    counting_side: str = "source",
    *,
    allow_partial: bool = False,
) -> ComparisonReport:
    if len(engine_ids) < 2:
        raise ValueError("comparison needs at least two engines")
    return build_comparison(
        project, engine_ids, counting_side, allow_partial=allow_partial
    )


# --- machine format -------------------------------------------------------


def _category_map(values: Mapping[SegmentCategory, Any] | None) -> Any:
    if values is None:
        return None
    return {c.label: values[c] for c in SegmentCategory}


def _profile_document(profile: QualityProfile) -> dict[str, Any]:
    return {
        "engine_id": profile.engine_id,
        "counting_side": profile.counting_side,
        "total_epp": profile.total_epp,
        "total_segments": profile.total_segments,
        "total_words": profile.total_words,
        "unannotated_units": profile.unannotated_units,
        "matrix": {
            t.code: {s.label: profile.matrix[(t, s)] for s in Severity}
            for t in ErrorType
        },
        "segment_counts": _category_map(profile.segment_counts),
        "segment_percents": _category_map(category_percentages(profile.segment_counts)),
        "word_counts": _category_map(profile.word_counts),
        "word_percents": _category_map(category_percentages(profile.word_counts)),
        "epptu_histogram": {str(k): v for k, v in profile.epptu_histogram.items()},
    }


def report_document(report: ComparisonReport) -> dict[str, Any]:
    """Plain-data mirror of the report; percent fields are derived extras."""
    return {
        "project_id": report.project_id,
        "counting_side": report.counting_side,
        "generated_at": format_timestamp(report.generated_at),
        "partial": report.partial,
        "profiles": [_profile_document(p) for p in report.profiles],
        "deltas": [
            {
                "engine_a": d.engine_a,
                "engine_b": d.engine_b,
                "epp_delta": d.epp_delta,
                "segment_category_deltas": _category_map(d.segment_category_deltas),
                "word_category_deltas": _category_map(d.word_category_deltas),
            }
            for d in report.deltas
        ],
    }


def _category_counts(obj: Mapping[str, int]) -> dict[SegmentCategory, int]:
    return {SegmentCategory.from_label(label): value for label, value in obj.items()}


def parse_machine_report(text: str) -> ComparisonReport:
    """Inverse of the machine rendering (derived percent fields ignored)."""
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"malformed report document: {exc.msg}") from None
    profiles = tuple(
        QualityProfile(
            engine_id=p["engine_id"],
            counting_side=p["counting_side"],
            total_epp=p["total_epp"],
            matrix={
                (ErrorType.from_code(code), Severity.from_label(label)): count
                for code, row in p["matrix"].items()
                for label, count in row.items()
            },
            segment_counts=_category_counts(p["segment_counts"]),
            word_counts=_category_counts(p["word_counts"]),
            total_segments=p["total_segments"],
            total_words=p["total_words"],
            epptu_histogram={int(k): v for k, v in p["epptu_histogram"].items()},
            unannotated_units=p["unannotated_units"],
        )
        for p in document["profiles"]
    )
    deltas = tuple(
        EngineDeltas(
            engine_a=d["engine_a"],
            engine_b=d["engine_b"],
            epp_delta=d["epp_delta"],
            segment_category_deltas=_category_counts(d["segment_category_deltas"]),
            word_category_deltas=_category_counts(d["word_category_deltas"]),
        )
        for d in document["deltas"]
    )
    return ComparisonReport(
        project_id=document["project_id"],
        counting_side=document["counting_side"],
        profiles=profiles,
        deltas=deltas,
        generated_at=parse_timestamp(document["generated_at"], "generated_at"),
        partial=document["partial"],
    )


# --- table format ---------------------------------------------------------


def _format_percent(value: float | None) -> str:
    return "n/a" if value is None else f"{value:.1f}%"


def _render_rows(rows: list[list[str]], indent: str = "  ") -> list[str]:
    # Right-align every column except the first label column.
    widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
    lines = []
    for row in rows:
        cells = [row[0].ljust(widths[0])]
        cells += [row[i].rjust(widths[i]) for i in range(1, len(row))]
        lines.append((indent + "  ".join(cells)).rstrip())
    return lines


def _profile_table(profile: QualityProfile) -> list[str]:
    lines = [
        f"Engine: {profile.engine_id}",
        f"  Total EPP: {profile.total_epp}",
        f"  Segments: {profile.total_segments}"
        f"  Words: {profile.total_words}"
        f"  Unannotated: {profile.unannotated_units}",
        "",
        "  Error counts (type x severity)",
    ]
    matrix_rows = [["type", *(s.label for s in Severity), "total"]]
    for t in ErrorType:
        counts = [profile.matrix[(t, s)] for s in Severity]
        matrix_rows.append([t.code, *(str(c) for c in counts), str(sum(counts))])
    totals = [sum(profile.matrix[(t, s)] for t in ErrorType) for s in Severity]
    matrix_rows.append(["total", *(str(c) for c in totals), str(sum(totals))])
    lines += _render_rows(matrix_rows)

    seg_pct = category_percentages(profile.segment_counts)
    word_pct = category_percentages(profile.word_counts)
    lines += ["", "  Category breakdown (segment and word level)"]
    breakdown = [["category", "segments", "seg%", "words", "word%"]]
    for c in SegmentCategory:
        breakdown.append(
            [
                c.label,
                str(profile.segment_counts[c]),
                _format_percent(seg_pct[c] if seg_pct else None),
                str(profile.word_counts[c]),
                _format_percent(word_pct[c] if word_pct else None),
            ]
        )
    breakdown.append(
        [
            "total",
            str(profile.total_segments),
            _format_percent(100.0 if seg_pct else None),
            str(profile.total_words),
            _format_percent(100.0 if word_pct else None),
        ]
    )
    lines += _render_rows(breakdown)
    return lines


def _delta_table(delta: EngineDeltas) -> list[str]:
    lines = [
        f"Delta: {delta.engine_a} minus {delta.engine_b}",
        f"  EPP: {delta.epp_delta:+d}",
    ]
    rows = [["category", "segments", "words"]]
    for c in SegmentCategory:
        rows.append(
            [
                c.label,
                f"{delta.segment_category_deltas[c]:+d}",
                f"{delta.word_category_deltas[c]:+d}",
            ]
        )
    lines += _render_rows(rows)
    return lines


def _render_table(report: ComparisonReport) -> str:
    lines = [
        f"Quality comparison: project {report.project_id}",
        f"Counting side: {report.counting_side}",
        f"Generated: {format_timestamp(report.generated_at)}",
    ]
    if report.partial:
        lines.append("Note: unannotated units included, counted as unchanged")
    for profile in report.profiles:
        lines.append("")
        lines += _profile_table(profile)
    for delta in report.deltas:
        lines.append("")
        lines += _delta_table(delta)
    return "\n".join(lines) + "\n"


# --- plot_data format -----------------------------------------------------


def _plot_points(
    counts: Mapping[SegmentCategory, int],
    percents: Mapping[SegmentCategory, float] | None,
) -> list[dict[str, Any]]:
    return [
        {
            "category": c.label,
            "count": counts[c],
            "percent": percents[c] if percents is not None else None,
        }
        for c in SegmentCategory
    ]


def _render_plot_data(report: ComparisonReport) -> str:
    series = []
    for profile in report.profiles:
        series.append(
            {
                "engine_id": profile.engine_id,
                "level": "segment",
                "points": _plot_points(
                    profile.segment_counts, category_percentages(profile.segment_counts)
                ),
            }
        )
        series.append(
            {
                "engine_id": profile.engine_id,
                "level": "word",
                "points": _plot_points(
                    profile.word_counts, category_percentages(profile.word_counts)
                ),
            }
        )
    document = {
        "project_id": report.project_id,
        "counting_side": report.counting_side,
        "generated_at": format_timestamp(report.generated_at),
        "series": series,
    }
    return canonical_json(document)


def render_report(report: ComparisonReport, format: str = "machine") -> str:
    if format == "machine":
        return canonical_json(report_document(report))
    if format == "table":
        return _render_table(report)
    if format == "plot_data":
        return _render_plot_data(report)
    raise ValueError(f"format must be one of {REPORT_FORMATS}, got {format!r}")
