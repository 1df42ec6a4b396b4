"""Unit tests for Q-, (Q,W)- and (T,Q,W)-descriptions."""

import pytest
import pytest_check as check

from leveltrees.descriptions.qdesc import (
    CONSTANT,
    DescKind,
    DescriptionError,
    continuous_desc,
    corner_q,
    desc_q,
    desc_star,
    discontinuous_desc,
    extended_desc,
    is_regular,
)
from leveltrees.descriptions.qw import (
    QWDesc,
    cf_q,
    contraction,
    count_desc_qw,
    enum_desc_qw,
    factor_check_sqw,
    id_star,
    immediate_successor,
    least_degree2,
    render_qw,
    restrict_node,
    tensor_qw,
)
from leveltrees.trees.fixtures import DELTA_1, DELTA_2, fixture, tau21
from leveltrees.trees.level1 import MINUS_ONE, Level1Tree
from leveltrees.trees.level2 import L2_ROOT, Q0
from leveltrees.trees.towers import PartialLevel2

_LEVEL2 = ["Q0", "Q1", "Q20", "Q21", "Qstar", "T23", "QS21", "X22", "T22", "Q22"]
_WS = [Level1Tree(), Level1Tree.of((0,)), Level1Tree.of((0,), (0, 0)), Level1Tree.of((0,), (1,), (2,))]


class TestQDescriptions:
    """desc(2Q), desc*(Q) and corners."""

    def setup_method(self):
        self.Q = fixture("Q21")

    def test_desc_q(self):
        items = desc_q(self.Q)
        assert len(items) == 4
        kinds = sorted(x.kind.value for x in items)
        assert kinds == ["continuous", "continuous", "discontinuous", "discontinuous"]

    def test_desc_star_adds_level1_and_extended(self):
        items = desc_star(fixture("Q22"))
        assert len(items) == 1 + 4 + 2
        assert (1, (0,)) in items

    def test_corners(self):
        assert corner_q(2, CONSTANT) == (2, MINUS_ONE)
        assert corner_q(1, (0,)) == (1, (0,))
        x = discontinuous_desc(self.Q, ((0,),))
        assert corner_q(2, x) == (2, 0, (0,), MINUS_ONE)
        assert corner_q(2, extended_desc(self.Q, ((0,),))) == (2, 1, (0,), 0)

    def test_regular(self):
        assert is_regular(1, (0,))
        assert is_regular(2, extended_desc(self.Q, L2_ROOT))
        assert not is_regular(2, continuous_desc(self.Q, L2_ROOT))

    def test_degree_0_has_no_continuous_description(self):
        with pytest.raises(DescriptionError, match="has degree 0"):
            continuous_desc(fixture("Q20"), ((0,),))


class TestQWDescriptions:
    """desc(Q, W), counting and the level-1 tensor."""

    def test_counting_formula_matches_enumeration(self):
        for name in _LEVEL2:
            for W in _WS:
                Q = fixture(name)
                check.equal(len(enum_desc_qw(Q, W)), count_desc_qw(Q, W), f"{name}, |W| = {len(W)}")

    def test_guide_example_has_18_nodes(self):
        Q, W = fixture("QS21"), fixture("W21")
        assert count_desc_qw(Q, W) == 19
        U = tensor_qw(Q, W)
        assert len(U.tree) == 18
        assert render_qw(U.tau((17,))) == "(2, (a_(2), (1)))"
        assert render_qw(U.tau((0,))) == "(2, (a_(0), -1))"

    def test_q22_with_four_nodes(self):
        W4 = fixture("W4")
        assert count_desc_qw(fixture("Q22"), W4) == 16
        assert len(tensor_qw(fixture("Q22"), W4).tree) == 15

    def test_descending_order(self):
        items = enum_desc_qw(fixture("QS21"), fixture("W21"))
        keys = [d.sort_key() for d in items]
        assert keys == sorted(keys, reverse=True)
        assert items[0].is_constant

    def test_tau21_factors(self):
        tau = tau21()
        assert factor_check_sqw(tau, fixture("QS21"), fixture("W21"))
        assert not factor_check_sqw(tau, fixture("QS21"), Level1Tree.of((0,)))

    def test_identity_star_factors(self):
        S = fixture("S21")
        assert factor_check_sqw(id_star(S), Q0, S)

    def test_malformed_descriptions(self):
        with pytest.raises(DescriptionError, match="carries a map"):
            QWDesc(1, (0,), {(0,): (0,)})
        with pytest.raises(DescriptionError, match="map domain"):
            QWDesc(2, discontinuous_desc(fixture("Q21"), ((0,),)), {})
        with pytest.raises(DescriptionError, match="nonempty W"):
            least_degree2(Level1Tree())

    def test_restriction_of_nodes(self):
        W = fixture("W21")
        assert restrict_node((1, 0), W) == (1,)
        assert restrict_node((5,), W) == ()
        with pytest.raises(DescriptionError, match="already belongs"):
            restrict_node((0,), W)

    def test_immediate_successor_needs_something_above(self):
        items = enum_desc_qw(Q0, Level1Tree.of((0,)), descending=False)
        with pytest.raises(DescriptionError, match="nothing in the target set"):
            immediate_successor(items[-1], items[:-1])

    def test_contraction(self):
        seq, index = contraction([(1, 2), (2, 3), (3, 4)])
        assert seq == (1, 2, 3, 4)
        assert index == ((0, 0), (0, 1), (1, 1), (2, 1))

    def test_cofinality_tags(self):
        T = fixture("T22")
        assert cf_q(T, 1, (0,)) == 0
        assert cf_q(T, 2, ((0,),)) == 0
        assert cf_q(T, 2, ((1,),)) == 1
        assert cf_q(T, 2, ((1,), (0,))) == 2


class TestUniformCofinality:
    """ucf, ucf* and ucf- of partial level <=2 trees."""

    def test_degree1_hangs_from_the_constant(self):
        partial = PartialLevel2(Q0, DELTA_1)
        assert partial.ucf == (2, CONSTANT)
        assert partial.cf == 1
        with pytest.raises(DescriptionError, match="needs cofinality 2"):
            partial.ucf_minus

    def test_degree2_on_q0(self):
        partial = PartialLevel2(Q0, DELTA_2)
        e, x = partial.ucf
        assert e == 2
        assert x.kind == DescKind.EXTENDED
        assert partial.cf == 2
        assert partial.ucf_minus.corner == (2, ((0,), MINUS_ONE))
