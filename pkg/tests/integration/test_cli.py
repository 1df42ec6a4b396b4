"""Integration tests for the command line, verb by verb."""

import json
from pathlib import Path
from unittest.mock import patch

import pytest_check as check

from leveltrees import main
from leveltrees.main import run
from leveltrees.models import ExitCode

FIXTURES = Path(__file__).resolve().parents[2] / "fixtures"


class TestValidate:
    def test_valid_tree(self, capsys):
        code = run(["validate", str(FIXTURES / "Q21.json")])
        check.equal(code, ExitCode.OK)
        check.equal(json.loads(capsys.readouterr().out), [])

    def test_irregular_tree(self, tmp_path, capsys):
        """A gap between siblings is a violation unless --irregular is given."""
        path = tmp_path / "gap.json"
        path.write_text("[[0], [2]]", encoding="utf-8")
        check.equal(run(["validate", str(path)]), ExitCode.VIOLATIONS)
        violations = json.loads(capsys.readouterr().out)
        check.is_true(any(v["rule"] == "non-contiguous child" for v in violations))
        check.equal(run(["validate", str(path), "--irregular"]), ExitCode.OK)

    def test_bad_json(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text("{oops", encoding="utf-8")
        check.equal(run(["validate", str(path)]), ExitCode.PARSE_ERROR)
        check.is_in("error:", capsys.readouterr().err)

    def test_missing_file(self, tmp_path):
        assert run(["validate", str(tmp_path / "none.json")]) == ExitCode.PARSE_ERROR


class TestComputations:
    def test_otype(self, capsys):
        assert run(["otype", "Y23", "--format", "listing"]) == ExitCode.OK
        assert capsys.readouterr().out == "u3+w1+w\n"

    def test_otype_json(self, capsys):
        assert run(["otype", str(FIXTURES / "W4.json")]) == ExitCode.OK
        assert json.loads(capsys.readouterr().out) == {"otype": "w*5"}

    def test_desc(self, capsys):
        assert run(["desc", "Q21"]) == ExitCode.OK
        assert len(json.loads(capsys.readouterr().out)) == 4

    def test_tensor_paper_listing(self, capsys):
        """tensor --format paper prints the guide example listing."""
        code = run(["tensor", "--level", "21", "--left", "QS21", "--right", "W21", "--format", "paper"])
        assert code == ExitCode.OK
        assert capsys.readouterr().out == (FIXTURES / "qw_s21.txt").read_text(encoding="utf-8")

    def test_tensor_wrong_levels(self):
        code = run(["tensor", "--level", "21", "--left", "W21", "--right", "QS21"])
        assert code == ExitCode.PARSE_ERROR

    def test_analyze(self, capsys):
        assert run(["analyze", "u2*w1", "--level", "1"]) == ExitCode.OK
        out = json.loads(capsys.readouterr().out)
        check.equal(out["signature"], [2, 1])
        check.equal(out["approximation"], ["w1", "w1*w1"])
        check.equal(out["continuity"], "continuous")

    def test_analyze_zero(self):
        assert run(["analyze", "0", "--level", "1"]) == ExitCode.COMPUTATION_FAILED

    def test_factor_level1(self, capsys):
        code = run(["factor", "--minimal", "--source", "S21", "--target", "QS21", "--W", "W21", "--tau21", "--format", "listing"])
        assert code == ExitCode.OK
        assert capsys.readouterr().out == (FIXTURES / "psi_s21.txt").read_text(encoding="utf-8")

    def test_factor_level1_needs_w(self):
        assert run(["factor", "--source", "S21", "--target", "QS21"]) == ExitCode.PARSE_ERROR

    def test_shift(self, capsys):
        check.equal(run(["shift", "Y23", "--s", "[[0]]", "--s-prime", "[[3]]"]), ExitCode.OK)
        check.equal(run(["shift", "Y23", "--s", "[[0]]", "--s-prime", "[[2]]"]), ExitCode.VIOLATIONS)
        check.equal(run(["shift", "Y23", "--s", "[[7]]", "--s-prime", "[[0]]"]), ExitCode.COMPUTATION_FAILED)


class TestFixtures:
    def test_corrupted_copy(self, tmp_path, capsys):
        text = (FIXTURES / "qw_s21.txt").read_text(encoding="utf-8")
        (tmp_path / "qw_s21.txt").write_text(text.replace("a_(2)", "a_(3)", 1), encoding="utf-8")
        assert run(["fixtures", "qw_s21", "--dir", str(tmp_path)]) == ExitCode.VIOLATIONS
        report = json.loads(capsys.readouterr().out)
        assert report["qw_s21"].startswith("qw_s21:1:")

    def test_matching_copy(self, capsys):
        assert run(["fixtures", "psi_s21", "--dir", str(FIXTURES)]) == ExitCode.OK
        assert json.loads(capsys.readouterr().out) == {"psi_s21": None}

    def test_unknown_name(self):
        assert run(["fixtures", "nope", "--dir", str(FIXTURES)]) == ExitCode.COMPUTATION_FAILED


class TestUnexpectedErrors:
    def test_unexpected_error_exits_one(self, caplog, capsys):
        """A failure outside the library errors is logged and reported, not raised."""

        def boom(args, fmt):
            raise RuntimeError("disk on fire")

        with patch.dict(main._HANDLERS, {main.Verb.ANALYZE: boom}):
            code = run(["analyze", "u2"])
        check.equal(code, ExitCode.VIOLATIONS)
        check.is_in("error: disk on fire", capsys.readouterr().err)
        check.is_in("Unexpected error in analyze", caplog.text)
