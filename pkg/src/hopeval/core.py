"""Domain model and scoring for human post-editing annotations.

Errors recorded by an evaluator are typed (one of eight closed codes) and
weighted (five severities on a geometric scale). Per-unit penalties sum the
weights; unit penalties classify segments into unchanged / good enough /
must fix; per-engine aggregation yields a quality profile used for engine
comparison.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum, IntEnum
from typing import Iterable

from .errors import UnknownEngineError

COUNTING_SIDES = ("source", "target")


class ErrorType(Enum):
    """The eight error categories an evaluator may assign.

    The set is closed: no user-defined types. Member names are the wire
    codes; each member carries a display label and a working definition.
    """

    IMP = ("Impact", "Overly literal wording that blunts the effect the text should have on its audience.")
    RAM = ("Required adaptation missing", "A source defect or target-market requirement that had to be corrected or adapted, but was not.")
    TRM = ("Terminology", "Wrong, inconsistent, or non-domain term where the subject field fixes the expected one.")
    UGR = ("Ungrammatical", "Grammar fault in the target text: agreement, case, word form, or syntax.")
    MIS = ("Mistranslation", "The meaning of the source does not make it into the target.")
    STL = ("Style", "Awkward, clumsy, or off-register wording that is not otherwise incorrect.")
    PRF = ("Proofreading", "Mechanical slip: typo, punctuation, spacing, casing, or number formatting.")
    PRN = ("Proper name", "Person, product, organization, or place name rendered incorrectly.")

    def __init__(self, label: str, definition: str):
        self.label = label
        self.definition = definition

    @property
    def code(self) -> str:
        return self.name

    @classmethod
    def from_code(cls, code: str) -> "ErrorType":
        try:
            return cls[code.upper()]
        except KeyError:
            raise ValueError(f"unknown error type code: {code!r}") from None


class Severity(IntEnum):
    """Five severity levels with geometric weights; the weight is the value."""

    MINOR = 1
    MEDIUM = 2
    MAJOR = 4
    SEVERE = 8
    CRITICAL = 16

    @property
    def weight(self) -> int:
        return int(self)

    @property
    def label(self) -> str:
        return self.name.lower()

    @classmethod
    def from_label(cls, label: str) -> "Severity":
        try:
            return cls[label.upper()]
        except KeyError:
            raise ValueError(f"unknown severity level: {label!r}") from None


class SegmentCategory(IntEnum):
    """Post-editing verdict for one segment, ordered by how much work it needs."""

    UNCHANGED = 0
    GOOD_ENOUGH = 1
    MUST_FIX = 2

    @property
    def label(self) -> str:
        return self.name.lower()

    @classmethod
    def from_label(cls, label: str) -> "SegmentCategory":
        try:
            return cls[label.upper()]
        except KeyError:
            raise ValueError(f"unknown segment category: {label!r}") from None


@dataclass(frozen=True)
class ErrorAnnotation:
    """One recorded error: type and severity, with optional note and span.

    ``span`` is (start_char, end_char) into the engine's target text; bounds
    are checked against the text by project validation, not here.
    """

    error_type: ErrorType
    severity: Severity
    note: str | None = None
    span: tuple[int, int] | None = None
    annotator_id: str | None = None


@dataclass
class TranslationUnit:
    """One source segment with per-engine targets, post-edits, and annotations.

    Keys of ``annotations`` and ``post_edited`` must also appear in
    ``targets``; an engine key present in ``annotations`` with an empty list
    means "inspected, no errors", while an absent key means "not annotated".
    """

    id: str
    source: str
    targets: dict[str, str] = field(default_factory=dict)
    post_edited: dict[str, str] = field(default_factory=dict)
    annotations: dict[str, list[ErrorAnnotation]] = field(default_factory=dict)


@dataclass
class Engine:
    engine_id: str
    display_name: str = ""
    description: str = ""

    def __post_init__(self):
        if not self.display_name:
            self.display_name = self.engine_id


@dataclass
class AnnotationProject:
    """A corpus of translation units plus registered engines and metadata.

    Timestamps are UTC at second precision; the persistence layer refuses
    anything finer so saved documents round-trip byte-identically.
    """

    project_id: str
    name: str
    source_lang: str
    target_lang: str
    engines: list[Engine]
    units: list[TranslationUnit]
    created_at: datetime
    modified_at: datetime
    schema_version: int = 1

    def engine_ids(self) -> list[str]:
        return [e.engine_id for e in self.engines]

    def has_engine(self, engine_id: str) -> bool:
        return any(e.engine_id == engine_id for e in self.engines)

    def unit_by_id(self, unit_id: str) -> TranslationUnit | None:
        for unit in self.units:
            if unit.id == unit_id:
                return unit
        return None


@dataclass(frozen=True)
class QualityProfile:
    """Per-engine breakdown: error matrix, penalty total, category shares.

    ``matrix`` holds a count for every (type, severity) cell, zeros included.
    ``word_counts`` attributes each unit's whole word count to the unit's
    segment category. ``unannotated_units`` counts units with no annotation
    entry for the engine (they score 0 and classify as unchanged).
    """

    engine_id: str
    counting_side: str
    total_epp: int
    matrix: dict[tuple[ErrorType, Severity], int]
    segment_counts: dict[SegmentCategory, int]
    word_counts: dict[SegmentCategory, int]
    total_segments: int
    total_words: int
    epptu_histogram: dict[int, int]
    unannotated_units: int = 0


def epptu(annotations: Iterable[ErrorAnnotation]) -> int:
    """Error point penalty for one unit: sum of the severity weights.

    Every recorded instance contributes; repeats of the same error in the
    same or other units are never collapsed.
    """
    return sum(a.severity.weight for a in annotations)


def classify_segment(epptu_value: int) -> SegmentCategory:
    """Map a unit penalty to its category: 0 / 1-4 / 5 and up."""
    if epptu_value < 0:
        raise ValueError(f"penalty must be non-negative, got {epptu_value}")
    if epptu_value == 0:
        return SegmentCategory.UNCHANGED
    if epptu_value <= 4:
        return SegmentCategory.GOOD_ENOUGH
    return SegmentCategory.MUST_FIX


def hope_score(project: AnnotationProject, engine_id: str) -> int:
    """System-level score for one engine: sum of unit penalties over the corpus."""
    if not project.has_engine(engine_id):
        raise UnknownEngineError(engine_id)
    return sum(epptu(unit.annotations.get(engine_id, ())) for unit in project.units)


def word_count(text: str) -> int:
    """Count whitespace-delimited tokens after NFC normalization."""
    return len(unicodedata.normalize("NFC", text).split())


def aggregate(
    project: AnnotationProject,
    engine_id: str,
    counting_side: str = "source",
) -> QualityProfile:
    """Build the full quality profile for one engine.

    ``counting_side`` picks whose words the word-level breakdown counts:
    the source segment (default, the usual basis for effort quantification)
    or the engine's target text. A unit with no target recorded for the
    engine contributes zero words on the target side.
    """
    if not project.has_engine(engine_id):
        raise UnknownEngineError(engine_id)
    if counting_side not in COUNTING_SIDES:
        raise ValueError(
            f"counting_side must be one of {COUNTING_SIDES}, got {counting_side!r}"
        )

    matrix = {(t, s): 0 for t in ErrorType for s in Severity}
    segment_counts = {c: 0 for c in SegmentCategory}
    word_counts = {c: 0 for c in SegmentCategory}
    histogram: dict[int, int] = {}
    total_epp = 0
    total_words = 0
    unannotated = 0

    for unit in project.units:
        annotations = unit.annotations.get(engine_id)
        if annotations is None:
            annotations = []
            unannotated += 1
        for ann in annotations:
            matrix[(ann.error_type, ann.severity)] += 1
        unit_epp = epptu(annotations)
        total_epp += unit_epp
        category = classify_segment(unit_epp)
        segment_counts[category] += 1
        histogram[unit_epp] = histogram.get(unit_epp, 0) + 1
        if counting_side == "source":
            words = word_count(unit.source)
        else:
            words = word_count(unit.targets.get(engine_id, ""))
        word_counts[category] += words
        total_words += words

    return QualityProfile(
        engine_id=engine_id,
        counting_side=counting_side,
        total_epp=total_epp,
        matrix=matrix,
        segment_counts=segment_counts,
        word_counts=word_counts,
        total_segments=len(project.units),
        total_words=total_words,
        epptu_histogram=dict(sorted(histogram.items())),
        unannotated_units=unannotated,
    )
