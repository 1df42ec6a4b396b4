"""Unit tests for minimal factoring, minimality and amalgamation."""

from pathlib import Path

import pytest

from leveltrees.analysis.signature import otype_labels
from leveltrees.compare.minimal import (
    AmalgamationError,
    SearchCapExceeded,
    amalgamate,
    candidate_trees,
    is_minimal,
    minimal_factor_l1,
    minimal_factor_l2,
    minimal_factor_l3,
)
from leveltrees.descriptions.qw import FactoringError
from leveltrees.ordinals.bk import bk_key
from leveltrees.ordinals.uterm import UTerm
from leveltrees.rendering.text import render_psi_l1
from leveltrees.trees.fixtures import fixture, tau21
from leveltrees.trees.level1 import Level1Tree, TreeValidationError
from leveltrees.trees.level2 import Level2Factoring, Q0
from leveltrees.trees.level3 import Level3Factoring

FIXTURES = Path(__file__).resolve().parents[2] / "fixtures"


class TestMinimalFactorL1:
    """psi: S -> Q (x) W."""

    def setup_method(self):
        self.S, self.Q, self.W = fixture("S21"), fixture("QS21"), fixture("W21")

    def test_guide_example_listing(self):
        psi = minimal_factor_l1(self.S, self.Q, self.W, tau21())
        expected = (FIXTURES / "psi_s21.txt").read_text(encoding="utf-8")
        assert render_psi_l1(psi, self.S) == expected

    def test_without_tau_keeps_the_order(self):
        psi = minimal_factor_l1(self.S, self.Q, self.W)
        assert set(psi) == set(self.S.nodes)
        images = [psi[s] for s in self.S.ordered]
        assert all(bk_key(a) < bk_key(b) for a, b in zip(images, images[1:]))

    def test_tau_of_another_tree(self):
        with pytest.raises(FactoringError, match="does not factor"):
            minimal_factor_l1(fixture("W4"), self.Q, self.W, tau21())

    def test_source_too_large(self):
        big = Level1Tree.of(*[(i,) for i in range(40)])
        with pytest.raises(FactoringError, match="nodes but Q"):
            minimal_factor_l1(big, self.Q, self.W)


class TestIsMinimal:
    def test_level1_identity(self):
        W = fixture("W4")
        assert is_minimal({x: x for x in W.nodes}, W, W)

    def test_level1_shift_changes_order_types(self):
        W = fixture("W4")
        bigger = Level1Tree.of(*[(i,) for i in range(5)])
        shifted = {(i,): (i + 1,) for i in range(4)}
        assert not is_minimal(shifted, W, bigger)

    def test_level1_needs_trees(self):
        with pytest.raises(TreeValidationError, match="source and target"):
            is_minimal({(0,): (0,)})

    def test_identities(self):
        assert is_minimal(Level2Factoring.identity(fixture("X22")))
        assert is_minimal(Level3Factoring.identity(fixture("Y23")))


class TestSearch:
    def test_candidates_start_at_q0(self):
        first = next(candidate_trees(3))
        assert first == Q0

    def test_candidates_grow_from_a_start(self):
        start = fixture("Q21")
        trees = candidate_trees(1, start)
        assert next(trees) == start
        grown = next(trees)
        assert start.is_subtree_of(grown)
        assert len(grown) == len(start) + 1

    def test_cap_zero_hands_out_q0_only(self):
        trees = candidate_trees(0)
        assert next(trees) == Q0
        with pytest.raises(SearchCapExceeded, match="at most 0 nodes"):
            next(trees)


class TestAmalgamate:
    def test_level1_with_itself(self):
        W = fixture("W4")
        labels = otype_labels(W)
        out = amalgamate(1, (W, labels), (W, labels))
        assert out.tree == W
        assert out.first == {x: x for x in W.nodes}
        assert out.labels == labels

    def test_level3_with_itself(self):
        Y = fixture("Y23")
        labels = otype_labels(Y)
        out = amalgamate(3, (Y, labels), (Y, labels))
        assert set(out.tree.dom) == set(Y.dom)

    def test_bad_level(self):
        W = fixture("W4")
        with pytest.raises(TreeValidationError, match="level must be"):
            amalgamate(4, (W, {}), (W, {}))

    def test_labels_must_respect(self):
        W = fixture("W21")
        wrong = {(0,): UTerm.omega(3), (1,): UTerm.omega(2), (2,): UTerm.omega(1)}
        with pytest.raises(AmalgamationError, match="do not respect"):
            amalgamate(1, (W, wrong), (W, otype_labels(W)))


class TestMinimalFactorGreedy:
    """Node by node construction of psi and rho."""

    def test_level2_tree_into_itself_needs_no_growth(self):
        T = fixture("T22")
        found = minimal_factor_l2(T, T)
        assert found.Q == Q0
        assert is_minimal(found.psi)

    def test_level3_tree_into_itself_needs_no_growth(self):
        Y = fixture("Y23")
        found = minimal_factor_l3(Y, Y)
        assert found.T == Q0
        assert found.top is None
        assert is_minimal(found.rho)

    def test_level3_root_above_the_target(self):
        with pytest.raises(FactoringError, match="above"):
            minimal_factor_l3(fixture("Y23"), fixture("R23"))

    def test_deep_level3_nodes_are_compared(self):
        R = fixture("R23")
        assert is_minimal(Level3Factoring.identity(R))
