"""Unit tests for level-1, level <=2 and level-3 trees."""

import pytest
import pytest_check as check

from leveltrees.trees.fixtures import (
    DELTA_1,
    DELTA_2,
    DELTA_22,
    FIXTURE_NAMES,
    FixtureError,
    fixture,
    fixture_level,
)
from leveltrees.trees.level1 import (
    MINUS_ONE,
    Level1Tower,
    Level1Tree,
    TreeValidationError,
    format_node,
    validate_level1,
)
from leveltrees.trees.level2 import (
    Entry,
    L2_ROOT,
    Level2Factoring,
    Level2Tree,
    Q0,
    factor_check_l2,
    format_l2,
    validate_level2,
)
from leveltrees.trees.level3 import (
    Level3Factoring,
    Level3Tree,
    factor_check_l3,
    shift_check,
    validate_level3,
)
from leveltrees.trees.towers import ZERO_DELTA, Delta, PartialLevel2, delta_problems

_VALIDATORS = {1: validate_level1, 2: validate_level2, 3: validate_level3}


def test_every_fixture_is_valid():
    """All named trees pass validation in regular form."""
    for name in FIXTURE_NAMES:
        violations = _VALIDATORS[fixture_level(name)](fixture(name))
        check.equal(violations, [], f"{name}: {[str(v) for v in violations]}")


def test_unknown_fixture():
    with pytest.raises(FixtureError, match="Unknown fixture"):
        fixture("Q99")


class TestLevel1:
    """Level-1 trees and towers."""

    def setup_method(self):
        self.W4 = fixture("W4")
        self.S = fixture("S21")

    def test_order_and_ranks(self):
        assert self.W4.ordered == ((0,), (1,), (2,), (3,))
        assert self.S.ordered[0] == (0,)
        assert self.S.ordered[-1] == (3,)
        assert self.S.rank((1, 2, 0)) == 3
        assert self.S.pred((1,)) == (1, 2)
        assert self.S.pred((0,)) is None

    def test_formatting(self):
        assert format_node((0, 1)) == "(0, 1)"
        assert format_node(MINUS_ONE) == "-1"
        assert str(self.W4) == "{(3), (2), (1), (0)}"
        assert str(Level1Tree()) == "{}"

    def test_new_nodes_are_regular(self):
        assert self.W4.new_nodes() == [(0, 0), (1, 0), (2, 0), (3, 0), (4,)]
        assert self.W4.is_new_node((4,))
        assert not self.W4.is_new_node((5,))
        assert self.W4.is_new_node((5,), regular=False)

    def test_completion(self):
        assert self.W4.completion(MINUS_ONE) == self.W4
        assert (4,) in self.W4.completion((4,))
        with pytest.raises(TreeValidationError, match="not a legal new node"):
            self.W4.with_node((0,))

    def test_violations(self):
        gap = Level1Tree.of((0,), (2,))
        assert [v.rule for v in validate_level1(gap)] == ["non-contiguous child"]
        assert validate_level1(gap, regular=False) == []
        orphan = Level1Tree.of((0, 1))
        assert "closed" in [v.rule for v in validate_level1(orphan, regular=False)]

    def test_tower(self):
        tower = Level1Tower(((0,), (0, 0), MINUS_ONE))
        assert tower.is_valid()
        assert tower.length == 2
        assert tower.tree == Level1Tree.of((0,), (0, 0))
        assert tower.ucf == MINUS_ONE
        with pytest.raises(TreeValidationError, match="no pending node"):
            tower.extend((1,))
        assert not Level1Tower((MINUS_ONE, (0,))).is_valid()


class TestLevel2:
    """Level <=2 trees, partial trees and factorings."""

    def setup_method(self):
        self.T = fixture("T22")
        self.Q21 = fixture("Q21")

    def test_shape(self):
        assert len(self.T) == 5
        assert self.T.children(L2_ROOT) == [(0,), (1,)]
        assert self.T.degree(((0,),)) == 0
        assert self.T.node_at(((1,), (0,))) == (0, 1)
        assert self.T.tower_at(((1,), (0,))).nodes == ((0,), (0, 0), (0, 1))
        assert format_l2(((1,), (0,))) == "((1), (0))"

    def test_missing_entry(self):
        with pytest.raises(TreeValidationError, match="not in the domain of 2Q"):
            self.T.entry(((2,),))

    def test_incoherent_trees(self):
        below_degree_0 = Level2Tree.build(
            [], {((0,),): ([(0,)], MINUS_ONE), ((0,), (0,)): ([(0,), (0, 0)], MINUS_ONE)}
        )
        assert "coherence" in [v.rule for v in validate_level2(below_degree_0)]
        root_child = Level2Tree.build([], {((0,),): ([(0,)], (1,))})
        assert "node component" in [v.rule for v in validate_level2(root_child)]
        bad_root = Level2Tree(Level1Tree(), ((L2_ROOT, Entry(Level1Tree(), MINUS_ONE)),))
        assert "root entry" in [v.rule for v in validate_level2(bad_root)]

    def test_completions(self):
        partial = PartialLevel2(Q0, DELTA_2)
        assert partial.validate() == []
        assert partial.completions() == [self.Q21, fixture("Q20")]
        assert PartialLevel2(Q0, DELTA_1).completions() == [fixture("Q1")]

    def test_degree_0_has_no_completion(self):
        with pytest.raises(TreeValidationError, match="no completion"):
            PartialLevel2(Q0, ZERO_DELTA).completions()

    def test_delta_problems(self):
        assert delta_problems(self.Q21, DELTA_22) == []
        assert delta_problems(Q0, DELTA_22) != []
        with pytest.raises(TreeValidationError, match="degree must be"):
            Delta(3)

    def test_identity_factoring(self):
        assert factor_check_l2(Level2Factoring.identity(self.T))

    def test_factoring_must_keep_entries(self):
        pi = Level2Factoring(self.Q21, self.T, {}, {((0,),): ((0,),)})
        assert not factor_check_l2(pi)
        pi = Level2Factoring(self.Q21, self.T, {}, {((0,),): ((1,),)})
        assert factor_check_l2(pi)


class TestLevel3:
    """Level-3 trees, factorings and shifts."""

    def setup_method(self):
        self.R = fixture("R23")
        self.Y = fixture("Y23")

    def test_shape(self):
        assert len(self.R) == 4
        assert self.R.children(((0,),)) == [(0,), (1,)]
        assert self.R.tree_at(((0,), (0,), (0,))) == fixture("Qstar")
        assert self.R.delta_at(((0,), (1,))) == DELTA_22

    def test_tower_is_valid(self):
        tower = self.R.tower_at(((0,), (0,), (0,)))
        assert tower.deltas == (DELTA_2, DELTA_1, ZERO_DELTA)
        assert tower.is_valid()

    def test_base_violation(self):
        bad = Level3Tree.build({((0,),): (fixture("Q21"), ZERO_DELTA)})
        assert "base" in [v.rule for v in validate_level3(bad)]

    def test_restricted_and_below(self):
        assert len(self.R.restricted([((0,),), ((0,), (1,)), ((0,), (0,), (0,))])) == 2
        assert self.Y.below(((2,),)).dom == (((0,),), ((1,), (0,)), ((1,),))

    def test_identity_factoring(self):
        assert factor_check_l3(Level3Factoring.identity(self.R))
        swapped = Level3Factoring(self.Y, self.Y, {((0,),): ((3,),), ((3,),): ((0,),), ((1,),): ((1,),),
                                                   ((1,), (0,)): ((1,), (0,)), ((2,),): ((2,),)})
        assert not factor_check_l3(swapped)

    def test_shift(self):
        assert shift_check(self.Y, (((0,),),), (((3,),),))
        assert not shift_check(self.Y, (((0,),),), (((2,),),))
        assert not shift_check(self.R, (((0,), (0,)),), (((0,), (1,)),))
        assert not shift_check(self.Y, (((0,),),), (((1,), (0,)),))
        with pytest.raises(TreeValidationError, match="needs nodes of R"):
            shift_check(self.Y, (((7,),),), (((0,),),))
