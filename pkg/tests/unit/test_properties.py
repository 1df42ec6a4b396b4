"""Property suites over randomly grown trees: counting, the description order,
restriction against brute-force neighbours, and plant-and-recover factoring."""

from functools import lru_cache

import pytest_check as check
from hypothesis import given, settings, strategies as st

from leveltrees.analysis.otype import node_otype
from leveltrees.compare.minimal import (
    SearchCapExceeded,
    candidate_trees,
    is_minimal,
    minimal_factor_l1,
    minimal_factor_l2,
    minimal_factor_l3,
)
from leveltrees.descriptions.qdesc import DescriptionError, corner_key, desc_star
from leveltrees.descriptions.qw import (
    FactorSQW,
    QWDesc,
    count_desc_qw,
    enum_desc_qw,
    factor_check_sqw,
    prec,
    restrict_node,
    restrict_qw,
    restrict_star,
    similar,
    tensor_qw,
)
from leveltrees.descriptions.tqw import enum_desc_tqw, tensor_tq
from leveltrees.descriptions.ytq import enum_desc_ytq, restrict_ytq, tensor_yt
from leveltrees.ordinals.bk import bk_key
from leveltrees.trees.fixtures import fixture
from leveltrees.trees.level1 import EMPTY, ROOT, Level1Tree
from leveltrees.trees.level2 import L2_ROOT, Level2Factoring

picks = st.lists(st.integers(0, 20), max_size=5)


def grow1(choices) -> Level1Tree:
    """The level-1 tree reached by adding new_nodes()[c] for each choice c."""
    W = EMPTY
    for c in choices:
        options = W.new_nodes()
        W = W.with_node(options[c % len(options)])
    return W


@lru_cache(maxsize=None)
def grown_trees(cap: int = 2) -> tuple:
    out = []
    try:
        for Q in candidate_trees(cap):
            out.append(Q)
    except SearchCapExceeded:
        pass
    return tuple(out)


@lru_cache(maxsize=None)
def extensions(name: str) -> tuple:
    """(Q, C) pairs with C grown from the fixture Q by one node."""
    Q = fixture(name)
    out = []
    try:
        for C in candidate_trees(1, start=Q):
            if C != Q:
                out.append((Q, C))
    except SearchCapExceeded:
        pass
    return tuple(out)


@lru_cache(maxsize=None)
def tq_tensor(t: str, q: str):
    return tensor_tq(fixture(t), fixture(q))


@lru_cache(maxsize=None)
def yt_tensor(y: str, t: str):
    return tensor_yt(fixture(y), fixture(t))


def star_key(dx) -> tuple:
    return corner_key(*dx)


def _gap_is_empty(x, got, targets, key) -> bool:
    return not any(key(x) < key(t) < key(got) for t in targets)


def _brute_successor(x, targets, key, restrict) -> None:
    """restrict(x) is the least target above x, or fails when no target lies above."""
    if not any(key(t) > key(x) for t in targets):
        with check.raises(DescriptionError):
            restrict(x)
        return
    got = restrict(x)
    check.is_true(any(key(t) == key(got) for t in targets))
    check.greater(key(got), key(x))
    check.is_true(_gap_is_empty(x, got, targets, key))


class TestCounting:
    @given(st.integers(0, 10**6), picks)
    @settings(max_examples=60, deadline=None)
    def test_count_matches_enumeration(self, i, choices):
        trees = grown_trees()
        Q, W = trees[i % len(trees)], grow1(choices)
        assert count_desc_qw(Q, W) == len(enum_desc_qw(Q, W))

    @given(st.integers(0, 10**6), picks)
    @settings(max_examples=30, deadline=None)
    def test_order_is_total_with_similarity_as_kernel(self, i, choices):
        trees = grown_trees()
        items = enum_desc_qw(trees[i % len(trees)], grow1(choices))
        for a in items:
            check.is_false(prec(a, a))
            for b in items:
                exactly_one = [prec(a, b), prec(b, a), similar(a, b)].count(True) == 1
                check.is_true(exactly_one, f"{a} and {b}")


class TestRestriction:
    """Each restriction is the least target above the description, with nothing in between."""

    @given(picks, st.integers(0, 5))
    @settings(max_examples=60, deadline=None)
    def test_node_restriction(self, choices, cut):
        big, W = grow1(choices), grow1(choices[:cut])
        for w in big.ordered:
            if w in W:
                continue
            got = restrict_node(w, W)
            if got == ROOT:
                check.is_false(any(bk_key(y) > bk_key(w) for y in W.nodes))
                continue
            check.is_true(got in W)
            check.greater(bk_key(got), bk_key(w))
            check.is_false(any(bk_key(w) < bk_key(y) < bk_key(got) for y in W.nodes))

    @given(st.sampled_from(["Q1", "Q21", "QS21", "Q22", "T22"]), picks, st.integers(0, 5))
    @settings(max_examples=60, deadline=None)
    def test_qw_restriction_to_a_smaller_w(self, name, choices, cut):
        Q = fixture(name)
        big, W = grow1(choices), grow1(choices[:cut])
        targets = enum_desc_qw(Q, W)
        inside = {d.corner for d in targets}
        for D in enum_desc_qw(Q, big):
            if D.corner not in inside:
                _brute_successor(D, targets, QWDesc.sort_key, lambda d: restrict_qw(d, Q, W))

    @given(st.sampled_from(["Q0", "Q1", "Q20", "Q21", "Q22"]), st.integers(0, 10**6), picks)
    @settings(max_examples=60, deadline=None)
    def test_qw_restriction_to_a_smaller_q(self, name, i, choices):
        pairs = extensions(name)
        Q, C = pairs[i % len(pairs)]
        W = grow1(choices)
        targets = enum_desc_qw(Q, W)
        inside = {d.corner for d in targets}
        for D in enum_desc_qw(C, W):
            if D.corner not in inside:
                _brute_successor(D, targets, QWDesc.sort_key, lambda d: restrict_qw(d, Q, W))

    @given(st.sampled_from(["Q0", "Q1", "Q20", "Q21", "Q22", "T23"]), st.integers(0, 10**6))
    @settings(max_examples=60, deadline=None)
    def test_star_restriction(self, name, i):
        pairs = extensions(name)
        Q, C = pairs[i % len(pairs)]
        targets = desc_star(Q)
        inside = {star_key(dx) for dx in targets}
        for dx in desc_star(C):
            if star_key(dx) not in inside:
                _brute_successor(dx, targets, star_key, lambda t: restrict_star(*t, Q))

    @given(st.sampled_from([("T23", "Q21"), ("T22", "Q22"), ("T23", "QS21"), ("T44", "Q22")]), st.integers(0, 10**6))
    @settings(max_examples=60, deadline=None)
    def test_tqw_branch_restriction(self, pair, i):
        U = tq_tensor(*pair)
        T, Q = fixture(pair[0]), fixture(pair[1])
        deep = sorted(x for (d, x) in U.table if d == 2 and x != L2_ROOT)
        if not deep:
            return
        x = deep[i % len(deep)]
        up = U(2, x[:-1])
        tower = up.tower
        got = U(2, x).restrict_tower(tower.tree, Q)
        check.equal(got.corner, up.corner)
        check.is_true(any(C.corner == got.corner for C in enum_desc_tqw(T, Q, tower)))

    @given(st.sampled_from([("Y23", "Q0"), ("R23", "Q0"), ("Y23", "Q21"), ("R23", "Q21")]), st.integers(0, 10**6))
    @settings(max_examples=60, deadline=None)
    def test_ytq_restriction_lands_in_the_shorter_tower(self, pair, i):
        U = yt_tensor(*pair)
        Y, T = fixture(pair[0]), fixture(pair[1])
        deep = sorted((r for r in U.tree.dom if len(r) > 1), key=bk_key)
        if not deep:
            return
        r = deep[i % len(deep)]
        B = U(r)
        k = B.tower.length
        got = restrict_ytq(B, Y, T, k - 1)
        check.equal(got.corner, U(r[:-1]).corner)
        shorter = enum_desc_ytq(Y, T, B.tower.prefix(k - 1))
        check.is_true(any(D.corner == got.corner for D in shorter))


class TestPlantAndRecover:
    """Factorings planted into a tensor product are found again."""

    @given(st.data())
    @settings(max_examples=100, deadline=None)
    def test_level1(self, data):
        Q = fixture(data.draw(st.sampled_from(["Q1", "Q21", "QS21", "Q22"])))
        W = grow1(data.draw(st.lists(st.integers(0, 20), min_size=1, max_size=3)))
        pool = sorted((d for d in enum_desc_qw(Q, W) if not d.is_constant), key=QWDesc.sort_key)
        chosen = sorted(data.draw(st.sets(st.integers(0, len(pool) - 1), max_size=min(len(pool), 5))))
        S = grow1(data.draw(st.lists(st.integers(0, 20), min_size=len(chosen), max_size=len(chosen))))
        tau = FactorSQW(S, dict(zip(S.ordered, [pool[i] for i in chosen])))
        assert factor_check_sqw(tau, Q, W)
        psi = minimal_factor_l1(S, Q, W, tau)
        U = tensor_qw(Q, W)
        for s in S.ordered:
            check.equal(U.tau(psi[s]).corner, tau(s).corner)

    @given(st.integers(0, 10**6))
    @settings(max_examples=100, deadline=None)
    def test_level2(self, i):
        trees = grown_trees()
        X = trees[i % len(trees)]
        assert is_minimal(Level2Factoring.identity(X))
        found = minimal_factor_l2(X, X)
        check.equal(found.psi.source, X)
        check.is_true(is_minimal(found.psi))

    @given(st.sampled_from(["Y23", "R23"]), st.integers(0, 10**6))
    @settings(max_examples=100, deadline=None)
    def test_level3(self, name, i):
        Y = fixture(name)
        tops = sorted((r for r in Y.dom if len(r) == 1), key=bk_key)
        cuts = [Y] + [Y.below(t) for t in tops if Y.below(t).dom]
        R = cuts[i % len(cuts)]
        found = minimal_factor_l3(R, R)
        check.is_true(is_minimal(found.rho))
        check.is_none(found.top)
        for r in R.dom:
            check.equal(node_otype(found.tensor.tree, found.rho(r)), node_otype(R, r))


class TestMinimalityOnFixtures:
    def test_identities_are_minimal(self):
        for name in ["Q21", "T23", "X22", "T22", "QS21"]:
            X = fixture(name)
            check.is_true(is_minimal(Level2Factoring.identity(X)), name)
        for name in ["Y23", "R23"]:
            check.is_true(is_minimal(minimal_factor_l3(fixture(name), fixture(name)).rho), name)

    def test_minimal_factorings_of_fixtures(self):
        for name in ["T23", "T22", "X22"]:
            X = fixture(name)
            check.is_true(is_minimal(minimal_factor_l2(X, X).psi), name)
