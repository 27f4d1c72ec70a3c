"""Human-centric MT quality scoring with classic edit-rate baselines."""

from .core import (
    COUNTING_SIDES,
    AnnotationProject,
    Engine,
    ErrorAnnotation,
    ErrorType,
    QualityProfile,
    SegmentCategory,
    Severity,
    TranslationUnit,
    aggregate,
    classify_segment,
    epptu,
    hope_score,
    word_count,
)
from .errors import (
    EmptyReferenceError,
    HopeError,
    IncompleteAnnotationError,
    NotFoundError,
    ProjectFormatError,
    ProjectValidationError,
    RevisionConflictError,
    TsvImportError,
    UnknownEngineError,
    UnsupportedSchemaError,
)
from .ingest import (
    ColumnMapping,
    Violation,
    canonical_json,
    import_tsv,
    load_project,
    render_project,
    save_project,
    validate_project,
)
from .metrics import (
    EditCounts,
    MetricResult,
    TokenizerConfig,
    TokenSequence,
    format_rate,
    hter,
    per,
    replay,
    ter,
    tokenize,
    wer,
)
from .report import (
    ComparisonReport,
    EngineDeltas,
    build_comparison,
    compare_engines,
    parse_machine_report,
    render_report,
    rounded_percentages,
)

__version__ = "0.1.0"

__all__ = [
    "AnnotationProject",
    "COUNTING_SIDES",
    "ColumnMapping",
    "ComparisonReport",
    "EditCounts",
    "EmptyReferenceError",
    "Engine",
    "EngineDeltas",
    "ErrorAnnotation",
    "ErrorType",
    "HopeError",
    "IncompleteAnnotationError",
    "MetricResult",
    "NotFoundError",
    "ProjectFormatError",
    "ProjectValidationError",
    "QualityProfile",
    "RevisionConflictError",
    "SegmentCategory",
    "Severity",
    "TokenSequence",
    "TokenizerConfig",
    "TranslationUnit",
    "TsvImportError",
    "UnknownEngineError",
    "UnsupportedSchemaError",
    "Violation",
    "aggregate",
    "build_comparison",
    "canonical_json",
    "classify_segment",
    "compare_engines",
    "epptu",
    "format_rate",
    "hope_score",
    "hter",
    "import_tsv",
    "load_project",
    "parse_machine_report",
    "per",
    "render_project",
    "render_report",
    "replay",
    "rounded_percentages",
    "save_project",
    "ter",
    "tokenize",
    "validate_project",
    "wer",
    "word_count",
]
