"""Exception hierarchy shared across the toolkit."""


class HopeError(Exception):
    """Base class for all toolkit errors."""


class UnknownEngineError(HopeError, KeyError):
    """An engine id was requested that is not registered in the project."""

    def __init__(self, engine_id: str):
        super().__init__(f"engine not found: {engine_id!r}")
        self.engine_id = engine_id

    def __str__(self) -> str:
        return self.args[0]


class EmptyReferenceError(HopeError, ValueError):
    """A rate was requested against an empty reference (undefined rate)."""


class TsvImportError(HopeError, ValueError):
    """A TSV row violated the import contract; carries the 1-based row number."""

    def __init__(self, message: str, row: int | None = None):
        super().__init__(message if row is None else f"row {row}: {message}")
        self.row = row


class ProjectFormatError(HopeError, ValueError):
    """A project document could not be parsed or decoded."""


class UnsupportedSchemaError(ProjectFormatError):
    """The project document declares a schema version this build cannot read."""


class ProjectValidationError(HopeError, ValueError):
    """An operation required a valid project but validation found violations."""

    def __init__(self, violations):
        self.violations = list(violations)
        lines = "; ".join(str(v) for v in self.violations)
        super().__init__(f"project failed validation: {lines}")


class NotFoundError(HopeError, LookupError):
    """A project or unit was addressed that does not exist."""


class IncompleteAnnotationError(HopeError, ValueError):
    """A comparison needed full annotation coverage and some units lack it."""

    def __init__(self, missing: dict):
        parts = ", ".join(f"{engine}: {count}" for engine, count in missing.items())
        super().__init__(
            f"units without annotations ({parts}); "
            "pass allow_partial to count them as unchanged"
        )
        self.missing = dict(missing)


class RevisionConflictError(HopeError):
    """An optimistic-concurrency write carried a stale expected revision."""

    def __init__(self, expected: int, current: int):
        super().__init__(
            f"revision conflict: expected {expected}, current is {current}"
        )
        self.expected = expected
        self.current = current
