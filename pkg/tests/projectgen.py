"""Deterministic random project builder shared across test modules."""

from __future__ import annotations

import random
from datetime import datetime, timedelta, timezone

from hopeval.core import (
    AnnotationProject,
    Engine,
    ErrorAnnotation,
    ErrorType,
    Severity,
    TranslationUnit,
)

VOCAB = (
    "the quick brown fox jumps over lazy dog при переводе текста "
    "machine output segment review quality переводчик оценка terminology "
    "style impact проверка"
).split()

NOTES = ("", "awkward phrasing", "термин не из глоссария", "casing", "dropped clause")

BASE_TIME = datetime(2024, 5, 17, 9, 30, 0, tzinfo=timezone.utc)


def random_text(rng: random.Random, min_words: int, max_words: int) -> str:
    return " ".join(rng.choice(VOCAB) for _ in range(rng.randint(min_words, max_words)))


def random_annotations(rng: random.Random, target: str) -> list[ErrorAnnotation]:
    annotations = []
    for _ in range(rng.randint(0, 4)):
        span = None
        if target and rng.random() < 0.4:
            start = rng.randrange(len(target))
            span = (start, rng.randint(start + 1, len(target)))
        annotations.append(
            ErrorAnnotation(
                error_type=rng.choice(list(ErrorType)),
                severity=rng.choice(list(Severity)),
                note=rng.choice(NOTES) or None if rng.random() < 0.3 else None,
                span=span,
                annotator_id=f"ann{rng.randint(1, 3)}" if rng.random() < 0.3 else None,
            )
        )
    return annotations


def random_project(
    rng: random.Random,
    *,
    max_units: int = 25,
    max_engines: int = 3,
    min_units: int = 0,
    full_coverage: bool = False,
) -> AnnotationProject:
    """A structurally valid project with randomized content.

    ``full_coverage`` annotates every unit for every engine; otherwise
    roughly a quarter of (unit, engine) slots stay unannotated.
    """
    engine_count = rng.randint(1, max_engines)
    engines = [
        Engine(
            engine_id=f"eng{i}",
            display_name=f"Engine {i}" if rng.random() < 0.5 else "",
            description="synthetic" if rng.random() < 0.2 else "",
        )
        for i in range(1, engine_count + 1)
    ]

    units = []
    for n in range(rng.randint(min_units, max_units)):
        targets = {}
        post_edited = {}
        annotations = {}
        for engine in engines:
            target = random_text(rng, 0, 10)
            targets[engine.engine_id] = target
            if rng.random() < 0.2:
                post_edited[engine.engine_id] = random_text(rng, 1, 10)
            if full_coverage or rng.random() < 0.75:
                annotations[engine.engine_id] = random_annotations(rng, target)
        units.append(
            TranslationUnit(
                id=f"u{n + 1:04d}",
                source=random_text(rng, 1, 12),
                targets=targets,
                post_edited=post_edited,
                annotations=annotations,
            )
        )

    created = BASE_TIME + timedelta(seconds=rng.randint(0, 10_000))
    return AnnotationProject(
        project_id=f"proj-{rng.randrange(16**8):08x}",
        name=rng.choice(("Trial", "Оценка качества", "release-check", "")),
        source_lang="en",
        target_lang="ru",
        engines=engines,
        units=units,
        created_at=created,
        modified_at=created + timedelta(seconds=rng.randint(0, 5_000)),
    )
