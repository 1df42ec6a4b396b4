"""Unit tests for the level <=2 and level-3 tensor products and their associators."""

from collections import Counter

import pytest
import pytest_check as check

from leveltrees.descriptions.iota import _star, iota_tqu, iota_tqw
from leveltrees.descriptions.qdesc import LEAST_CONTINUOUS, DescKind, DescriptionError, QDesc
from leveltrees.descriptions.qw import FactorSQW, QWDesc, count_desc_qw, tensor_qw
from leveltrees.descriptions.tqw import factor_check_xtq, tensor_tq
from leveltrees.descriptions.ytq import factor_check_ryt, tensor_yt
from leveltrees.trees.fixtures import fixture
from leveltrees.trees.level1 import Level1Tree
from leveltrees.trees.level2 import L2_ROOT, validate_level2
from leveltrees.trees.level3 import validate_level3


@pytest.fixture(scope="module")
def t22_q22():
    return tensor_tq(fixture("T22"), fixture("Q22"))


@pytest.fixture(scope="module")
def y23_t23():
    return tensor_yt(fixture("Y23"), fixture("T23"))


class TestTQ:
    """T22 (x) Q22."""

    def test_cardinality(self, t22_q22):
        X = t22_q22.tree
        assert len(X.t1) == 4
        assert len(X.dom) == 156
        assert len(X) == 160

    def test_nodes_by_length(self, t22_q22):
        X = t22_q22.tree
        by_length = Counter(len(x) for x in X.dom)
        degree1 = Counter(len(x) for x in X.dom if X.degree(x) == 1)
        check.equal([by_length[i] for i in range(6)], [1, 12, 31, 52, 45, 15])
        check.equal([degree1[i] for i in range(6)], [1, 8, 29, 52, 45, 15])

    def test_result_is_a_tree(self, t22_q22):
        assert validate_level2(t22_q22.tree) == []

    def test_representation_factors(self, t22_q22):
        assert factor_check_xtq(t22_q22.table, t22_q22.tree, fixture("T22"), fixture("Q22"))
        assert t22_q22(2, L2_ROOT).is_constant

    def test_associativity_count(self, t22_q22):
        """|(T (x) Q) (x) W| and |T (x) (Q (x) W)| agree at 711."""
        W4 = fixture("W4")
        left = count_desc_qw(t22_q22.tree, W4) - 1
        right = count_desc_qw(fixture("T22"), tensor_qw(fixture("Q22"), W4).tree) - 1
        assert left == 711
        assert right == 711


class TestYT:
    """Y23 (x) T23."""

    def test_cardinality(self, y23_t23):
        assert len(y23_t23.tree) == 147

    def test_result_is_a_tree(self, y23_t23):
        assert validate_level3(y23_t23.tree) == []

    def test_representation_factors(self, y23_t23):
        rho = dict(y23_t23.rho)
        assert factor_check_ryt(rho, y23_t23.tree, fixture("Y23"), fixture("T23"))

    def test_listing_is_bk_descending(self, y23_t23):
        nodes = [r for r, _ in y23_t23.listing()]
        for r in nodes:
            for i in range(1, len(r)):
                check.less(nodes.index(r[:i]), nodes.index(r))


class TestAssociators:
    """iota maps between the two bracketings."""

    def test_iota_tqw_matches_both_counts(self):
        T, Q, W = fixture("Q21"), fixture("Q21"), fixture("W21")
        iota = iota_tqw(T, Q, W)
        assert iota.is_bijective
        assert len(iota) == count_desc_qw(tensor_tq(T, Q).tree, W) - 1
        assert len(iota) == count_desc_qw(T, tensor_qw(Q, W).tree) - 1

    def test_iota_tqu_is_a_bijection(self):
        T, Q, U = fixture("T44"), fixture("Q21"), fixture("Q21")
        iota = iota_tqu(T, Q, U)
        assert iota.is_bijective
        assert len(iota) == len(tensor_tq(T, tensor_tq(Q, U).tree).pi)
        for left, right in iota.pairs:
            check.equal(iota.inverse(right).corner, left.corner)

    def test_continuous_clause_skips_a_last_value_ending_in_minus_one(self):
        t = QDesc(((0,), -1), Level1Tree.of((0,), (0, 0)), ((0,), (0, 0)), DescKind.CONTINUOUS)
        first = QWDesc(2, QDesc(((0,),), Level1Tree.of((0,)), ((0,), (1,))), {(0,): (0,)})
        last = QWDesc(2, LEAST_CONTINUOUS, {(0,): (0,)})
        tau = FactorSQW(t.tree, {(0,): first, (0, 0): last})
        psi = {(0,): (2,), (1,): (3,)}

        image, table = _star(t, tau, psi, new=(3,))

        assert image == t
        assert table[(0, 0)] == QWDesc(2, LEAST_CONTINUOUS, {(0,): (2,)})
        extended = table[(0,)]
        assert extended.q.kind == DescKind.CONTINUOUS
        assert extended.q.q == ((0,), -1)
        assert extended.sigma_map[(1,)] == (3,)

    def test_continuous_clause_without_an_extendable_value_raises(self):
        t = QDesc((-1,), Level1Tree.of((0,)), ((0,),), DescKind.CONTINUOUS)
        tau = FactorSQW(t.tree, {(0,): QWDesc(2, LEAST_CONTINUOUS, {(0,): (0,)})})
        with pytest.raises(DescriptionError, match="cannot be extended"):
            _star(t, tau, {(0,): (0,)}, new=(1,))
