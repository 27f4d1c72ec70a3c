"""Command line behaviour: subcommands, exit codes, stream discipline."""

from __future__ import annotations

import random

import pytest
from fastapi.testclient import TestClient

from hopeval.cli import run
from hopeval.core import ErrorAnnotation, ErrorType, Severity
from hopeval.ingest import load_project, render_project, save_project
from hopeval.report import build_comparison, parse_machine_report
from hopeval.service import ProjectStore, create_app
from projectgen import random_project

TSV = "id\tsource\tgoogle\tsys1\nu1\tone two three\tt1\tt2\nu2\tfour five\tt3\tt4\n"


@pytest.fixture()
def corpus(tmp_path):
    path = tmp_path / "corpus.tsv"
    path.write_text(TSV, encoding="utf-8")
    return path


def import_args(corpus, out):
    return [
        "import", "--tsv", str(corpus), "--source-col", "1",
        "--engine", "google=2", "--engine", "sys1=3",
        "--id-col", "0", "--out", str(out), "--project-id", "demo",
    ]


class TestImport:
    def test_import_then_validate(self, corpus, tmp_path, capsys):
        out = tmp_path / "demo.hope"
        assert run(import_args(corpus, out)) == 0
        captured = capsys.readouterr()
        assert captured.out == ""
        assert "2 units" in captured.err
        assert run(["validate", str(out)]) == 0
        assert capsys.readouterr().out == ""

    def test_import_bad_row_exits_one(self, tmp_path, capsys):
        bad = tmp_path / "bad.tsv"
        bad.write_text("u1\tsource only\n", encoding="utf-8")
        rc = run([
            "import", "--tsv", str(bad), "--source-col", "1",
            "--engine", "g=2", "--out", str(tmp_path / "x.hope"),
        ])
        assert rc == 1
        assert "row 1" in capsys.readouterr().err

    def test_bad_engine_spec_is_usage_error(self, corpus, tmp_path):
        rc = run([
            "import", "--tsv", str(corpus), "--source-col", "1",
            "--engine", "google", "--out", str(tmp_path / "x.hope"),
        ])
        assert rc == 2

    def test_duplicate_engine_mapping_is_usage_error(self, corpus, tmp_path, capsys):
        rc = run([
            "import", "--tsv", str(corpus), "--source-col", "1",
            "--engine", "g=2", "--engine", "g=3",
            "--out", str(tmp_path / "x.hope"),
        ])
        assert rc == 2
        assert "mapped twice" in capsys.readouterr().err


class TestScore:
    def test_prints_total(self, corpus, tmp_path, capsys):
        out = tmp_path / "demo.hope"
        run(import_args(corpus, out))
        project = load_project(out)
        project.units[0].annotations["google"] = [
            ErrorAnnotation(ErrorType.MIS, Severity.MAJOR),
        ]
        project.units[1].annotations["google"] = [
            ErrorAnnotation(ErrorType.TRM, Severity.MINOR),
            ErrorAnnotation(ErrorType.UGR, Severity.MAJOR),
        ]
        save_project(project, out)
        capsys.readouterr()
        assert run(["score", str(out), "--engine", "google"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert "total_epp: 9" in lines
        assert "segments: total=2 unchanged=0 good_enough=1 must_fix=1" in lines
        assert "words: total=5 unchanged=0 good_enough=3 must_fix=2" in lines
        assert "epptu_histogram: 4=1 5=1" in lines

    def test_unknown_engine_exits_one(self, corpus, tmp_path, capsys):
        out = tmp_path / "demo.hope"
        run(import_args(corpus, out))
        assert run(["score", str(out), "--engine", "bing"]) == 1
        assert "bing" in capsys.readouterr().err

    def test_missing_file_exits_one(self, capsys):
        assert run(["score", "/nonexistent.hope", "--engine", "g"]) == 1
        assert capsys.readouterr().err


class TestReport:
    def test_machine_output_reparses_to_same_report(self, corpus, tmp_path, capsys):
        out = tmp_path / "demo.hope"
        run(import_args(corpus, out))
        capsys.readouterr()
        rc = run([
            "report", str(out), "--engines", "google,sys1",
            "--format", "machine", "--allow-partial",
        ])
        assert rc == 0
        stdout = capsys.readouterr().out
        project = load_project(out)
        expected = build_comparison(
            project, ["google", "sys1"], allow_partial=True
        )
        assert parse_machine_report(stdout) == expected

    def test_partial_without_flag_exits_one(self, corpus, tmp_path, capsys):
        out = tmp_path / "demo.hope"
        run(import_args(corpus, out))
        assert run(["report", str(out), "--engines", "google,sys1"]) == 1
        assert "allow_partial" in capsys.readouterr().err

    def test_matches_service_bytes(self, corpus, tmp_path, capsys):
        out = tmp_path / "demo.hope"
        run(import_args(corpus, out))
        project = load_project(out)
        for unit in project.units:
            for engine_id in project.engine_ids():
                unit.annotations[engine_id] = [
                    ErrorAnnotation(ErrorType.STL, Severity.MEDIUM),
                ]
        save_project(project, out)
        client = TestClient(create_app(ProjectStore(tmp_path)))
        for format in ("machine", "table", "plot_data"):
            capsys.readouterr()
            assert run(["report", str(out), "--format", format]) == 0
            cli_bytes = capsys.readouterr().out
            http_bytes = client.get(
                "/projects/demo/report", params={"format": format}
            ).text
            assert cli_bytes == http_bytes

    def test_unknown_engine_exits_one(self, corpus, tmp_path):
        out = tmp_path / "demo.hope"
        run(import_args(corpus, out))
        assert run(["report", str(out), "--engines", "ghost,google"]) == 1


class TestScoreAuto:
    def write(self, tmp_path, name, lines):
        path = tmp_path / name
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        return str(path)

    def test_identical_files_rate_zero(self, tmp_path, capsys):
        hyp = self.write(tmp_path, "hyp.txt", ["a b c", "d e"])
        ref = self.write(tmp_path, "ref.txt", ["a b c", "d e"])
        for metric in ("wer", "per", "ter", "hter"):
            capsys.readouterr()
            assert run(["score-auto", "--hyp", hyp, "--ref", ref, "--metric", metric]) == 0
            assert capsys.readouterr().out == "1\t0.000000\n2\t0.000000\ncorpus\t0.000000\n"

    def test_corpus_rate_pools_by_reference_length(self, tmp_path, capsys):
        hyp = self.write(tmp_path, "hyp.txt", ["a b x", "z"])
        ref = self.write(tmp_path, "ref.txt", ["a b c", "q"])
        assert run(["score-auto", "--hyp", hyp, "--ref", ref]) == 0
        out = capsys.readouterr().out.splitlines()
        assert out == ["1\t0.333333", "2\t1.000000", "corpus\t0.500000"]

    def test_line_count_mismatch_names_counts(self, tmp_path, capsys):
        hyp = self.write(tmp_path, "hyp.txt", ["a", "b", "c"])
        ref = self.write(tmp_path, "ref.txt", ["a"])
        assert run(["score-auto", "--hyp", hyp, "--ref", ref]) == 1
        err = capsys.readouterr().err
        assert "3" in err and "1" in err

    def test_empty_reference_line_exits_one(self, tmp_path, capsys):
        hyp = self.write(tmp_path, "hyp.txt", ["a", "b"])
        ref = self.write(tmp_path, "ref.txt", ["a", ""])
        assert run(["score-auto", "--hyp", hyp, "--ref", ref]) == 1
        assert "line 2" in capsys.readouterr().err

    def test_tokenizer_flags_change_rates(self, tmp_path, capsys):
        hyp = self.write(tmp_path, "hyp.txt", ["Hello, World"])
        ref = self.write(tmp_path, "ref.txt", ["hello , world"])
        assert run(["score-auto", "--hyp", hyp, "--ref", ref]) == 0
        plain = capsys.readouterr().out.splitlines()[-1]
        assert plain == "corpus\t1.000000"
        assert run([
            "score-auto", "--hyp", hyp, "--ref", ref, "--lowercase", "--split-punct",
        ]) == 0
        assert capsys.readouterr().out.splitlines()[-1] == "corpus\t0.000000"


class TestValidate:
    def test_violations_listed_exit_one(self, tmp_path, capsys):
        project = random_project(random.Random(80), min_units=1)
        unit = project.units[0]
        unit.targets["ghost"] = "x"
        unit.annotations["ghost"] = []
        path = tmp_path / "bad.hope"
        path.write_text(render_project(project), encoding="utf-8")
        assert run(["validate", str(path)]) == 1
        out = capsys.readouterr().out
        assert out.count("\n") == 1
        assert "ghost" in out

    def test_unreadable_project_exits_one(self, tmp_path, capsys):
        path = tmp_path / "junk.hope"
        path.write_text("not a project", encoding="utf-8")
        assert run(["validate", str(path)]) == 1
        assert capsys.readouterr().err


class TestUsage:
    def test_unknown_subcommand(self, capsys):
        assert run(["frobnicate"]) == 2
        capsys.readouterr()

    def test_no_arguments(self, capsys):
        assert run([]) == 2
        capsys.readouterr()

    def test_bad_format_choice(self, corpus, tmp_path, capsys):
        out = tmp_path / "demo.hope"
        run(import_args(corpus, out))
        assert run(["report", str(out), "--format", "pdf"]) == 2
        capsys.readouterr()
