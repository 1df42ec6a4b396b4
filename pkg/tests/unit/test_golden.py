"""Unit tests for the golden listing store."""

import pytest

from leveltrees.storage.golden import GOLDEN_SOURCES, GoldenStore, first_divergence
from leveltrees.trees.fixtures import FixtureError


class TestFirstDivergence:
    def test_identical(self):
        assert first_divergence("x", "a\nb\n", "a\nb\n") is None

    def test_first_differing_line(self):
        diff = first_divergence("x", "a\nb\nc\n", "a\nB\nc\n")
        assert (diff.line, diff.expected, diff.actual) == (2, "b", "B")
        assert str(diff) == "x:2: expected 'b', got 'B'"

    def test_missing_lines(self):
        diff = first_divergence("x", "a\nb\n", "a\n")
        assert (diff.line, diff.expected, diff.actual) == (2, "b", None)

    def test_line_endings(self):
        diff = first_divergence("x", "a\nb\n", "a\r\nb\r\n")
        assert diff is not None
        assert diff.expected == "<line ending>"


class TestGoldenStore:
    def setup_method(self):
        self.store = GoldenStore()

    def test_every_source_has_a_file(self):
        assert set(GOLDEN_SOURCES) <= set(self.store.names())

    def test_missing_file(self, tmp_path):
        with pytest.raises(FixtureError, match="No golden listing"):
            GoldenStore(tmp_path).read("qw_s21")

    def test_unknown_golden(self):
        with pytest.raises(FixtureError, match="Unknown golden"):
            self.store.render("nope")

    def test_check_reports_a_corrupted_copy(self, tmp_path):
        text = self.store.read("psi_s21")
        (tmp_path / "psi_s21.txt").write_text(text.replace("(9)", "(10)"), encoding="utf-8")
        diff = GoldenStore(tmp_path).check("psi_s21")
        assert diff is not None
        assert diff.line == 1

    def test_check_passes_on_the_real_file(self):
        assert self.store.check("psi_s21") is None
