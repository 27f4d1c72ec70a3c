"""Command line front end.

Data goes to stdout, diagnostics to stderr. Exit codes: 0 success,
1 data or validation errors, 2 usage errors.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from typing import Callable

from .core import COUNTING_SIDES, SegmentCategory, aggregate
from .errors import HopeError
from .ingest import ColumnMapping, import_tsv, load_project, save_project, validate_project
from .metrics import TokenizerConfig, format_rate, hter, per, ter, tokenize, wer
from .report import REPORT_FORMATS, build_comparison, render_report
from .service import resolve_listen, resolve_projects_dir, serve, split_listen

METRICS = ("wer", "per", "ter", "hter")


def _engine_column(value: str) -> tuple[str, int]:
    engine, sep, column = value.partition("=")
    if not sep or not engine or not column.isdigit():
        raise argparse.ArgumentTypeError(
            f"expected ENGINE=COLUMN with a zero-based column index, got {value!r}"
        )
    return engine, int(column)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hopeval",
        description="Score post-editing annotations and edit-distance baselines.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("import", help="build a project file from a TSV corpus")
    p.add_argument("--tsv", required=True, help="tab-separated corpus file")
    p.add_argument("--source-col", type=int, required=True, metavar="N",
                   help="zero-based column holding the source text")
    p.add_argument("--engine", type=_engine_column, action="append", required=True,
                   metavar="ENGINE=N", help="engine id and its zero-based target column; repeatable")
    p.add_argument("--id-col", type=int, default=None, metavar="N",
                   help="zero-based column holding unit ids (default: generated ordinals)")
    p.add_argument("--out", required=True, metavar="P.hope", help="project file to write")
    p.add_argument("--project-id", default=None)
    p.add_argument("--name", default="")
    p.add_argument("--source-lang", default="und")
    p.add_argument("--target-lang", default="und")
    p.set_defaults(func=_cmd_import)

    p = sub.add_parser("score", help="print one engine's quality profile")
    p.add_argument("project", metavar="P.hope")
    p.add_argument("--engine", required=True)
    p.add_argument("--side", choices=COUNTING_SIDES, default="source")
    p.set_defaults(func=_cmd_score)

    p = sub.add_parser("report", help="render an engine comparison")
    p.add_argument("project", metavar="P.hope")
    p.add_argument("--engines", default="", metavar="E1,E2",
                   help="comma-separated engine ids (default: all registered)")
    p.add_argument("--format", choices=REPORT_FORMATS, default="table")
    p.add_argument("--side", choices=COUNTING_SIDES, default="source")
    p.add_argument("--allow-partial", action="store_true",
                   help="include units without annotations, counted as unchanged")
    p.set_defaults(func=_cmd_report)

    p = sub.add_parser("score-auto", help="edit-distance rates between two line-aligned files")
    p.add_argument("--hyp", required=True, help="hypothesis file, one segment per line")
    p.add_argument("--ref", required=True,
                   help="reference file (the post-edit, for --metric hter)")
    p.add_argument("--metric", choices=METRICS, default="wer")
    p.add_argument("--lowercase", action="store_true")
    p.add_argument("--split-punct", action="store_true",
                   help="split leading and trailing punctuation into their own tokens")
    p.set_defaults(func=_cmd_score_auto)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--listen", default=None, metavar="HOST:PORT")
    p.add_argument("--projects-dir", default=None, metavar="DIR")
    p.set_defaults(func=_cmd_serve)

    p = sub.add_parser("validate", help="check a project file's invariants")
    p.add_argument("project", metavar="P.hope")
    p.set_defaults(func=_cmd_validate)

    return parser


def _cmd_import(args: argparse.Namespace) -> int:
    targets: dict[str, int] = {}
    for engine, column in args.engine:
        if engine in targets:
            print(f"error: engine {engine!r} mapped twice", file=sys.stderr)
            return 2
        targets[engine] = column
    mapping = ColumnMapping(source=args.source_col, target_columns=targets, id=args.id_col)
    with open(args.tsv, "r", encoding="utf-8", newline="") as stream:
        project = import_tsv(
            stream,
            mapping,
            project_id=args.project_id,
            name=args.name,
            source_lang=args.source_lang,
            target_lang=args.target_lang,
        )
    save_project(project, args.out)
    print(f"imported {len(project.units)} units into {args.out}", file=sys.stderr)
    return 0


def _cmd_score(args: argparse.Namespace) -> int:
    project = load_project(args.project)
    profile = aggregate(project, args.engine, args.side)

    def categories(counts: dict[SegmentCategory, int], total: int) -> str:
        cells = " ".join(f"{c.label}={counts[c]}" for c in SegmentCategory)
        return f"total={total} {cells}"

    histogram = " ".join(f"{k}={v}" for k, v in profile.epptu_histogram.items())
    out = sys.stdout
    out.write(f"engine: {profile.engine_id}\n")
    out.write(f"side: {profile.counting_side}\n")
    out.write(f"total_epp: {profile.total_epp}\n")
    out.write(f"segments: {categories(profile.segment_counts, profile.total_segments)}\n")
    out.write(f"words: {categories(profile.word_counts, profile.total_words)}\n")
    out.write(f"epptu_histogram: {histogram}\n")
    out.write(f"unannotated_units: {profile.unannotated_units}\n")
    return 0


def _cmd_report(args: argparse.Namespace) -> int:
    project = load_project(args.project)
    engine_ids = args.engines.split(",") if args.engines else project.engine_ids()
    report = build_comparison(
        project, engine_ids, args.side, allow_partial=args.allow_partial
    )
    sys.stdout.write(render_report(report, args.format))
    return 0


def _cmd_score_auto(args: argparse.Namespace) -> int:
    with open(args.hyp, "r", encoding="utf-8") as handle:
        hyp_lines = handle.read().splitlines()
    with open(args.ref, "r", encoding="utf-8") as handle:
        ref_lines = handle.read().splitlines()
    if len(hyp_lines) != len(ref_lines):
        print(
            f"error: line counts differ: hyp has {len(hyp_lines)}, "
            f"ref has {len(ref_lines)}",
            file=sys.stderr,
        )
        return 1

    config = TokenizerConfig(lowercase=args.lowercase, split_punctuation=args.split_punct)
    rate_of: dict[str, Callable] = {
        "wer": lambda h, r: wer(h, r).rate,
        "per": per,
        "ter": lambda h, r: ter(h, [r]).rate,
        "hter": lambda h, r: hter(h, r).rate,
    }
    compute = rate_of[args.metric]

    numerator = Fraction(0)
    denominator = 0
    for number, (hyp_line, ref_line) in enumerate(zip(hyp_lines, ref_lines), start=1):
        hyp = tokenize(hyp_line, config)
        ref = tokenize(ref_line, config)
        if not ref.tokens:
            print(f"error: ref line {number} has no tokens", file=sys.stderr)
            return 1
        rate = compute(hyp, ref)
        # Pool exactly: every metric here divides by the reference length.
        numerator += rate * len(ref.tokens)
        denominator += len(ref.tokens)
        sys.stdout.write(f"{number}\t{format_rate(rate)}\n")
    corpus = numerator / denominator if denominator else Fraction(0)
    sys.stdout.write(f"corpus\t{format_rate(corpus)}\n")
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    listen = resolve_listen(args.listen)
    split_listen(listen)
    serve(listen, resolve_projects_dir(args.projects_dir))
    return 0


def _cmd_validate(args: argparse.Namespace) -> int:
    project = load_project(args.project)
    violations = validate_project(project)
    for violation in violations:
        sys.stdout.write(f"{violation}\n")
    return 1 if violations else 0


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except HopeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
