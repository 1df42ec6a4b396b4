"""Unit tests for the ordinal kernel."""

import pytest
from hypothesis import given, settings, strategies as st

from leveltrees.ordinals import (
    OMEGA,
    ONE,
    ZERO,
    BkDomainError,
    CnfOrdinal,
    OrdinalDomainError,
    OrdinalOverflowError,
    Ordering,
    UTerm,
    bk_cmp,
    bk_sorted,
    cnf_add,
    cnf_cmp,
    cnf_mul,
    hat,
    omega_power,
    unhat,
)


def _exponent(pairs):
    merged = {}
    for power, coeff in pairs:
        merged[power] = merged.get(power, 0) + coeff
    return tuple(sorted(merged.items(), reverse=True))


# Ordinals below omega^(omega^4)
exponents = st.lists(st.tuples(st.integers(0, 3), st.integers(1, 3)), max_size=3).map(_exponent)
ordinals = st.lists(exponents, max_size=4).map(lambda es: CnfOrdinal(tuple(sorted(es, reverse=True))))


def w_to(*pairs):
    return CnfOrdinal((tuple(pairs),))


class TestCnf:
    """Comparison and arithmetic on normal forms."""

    def test_compare_examples(self):
        assert cnf_cmp(ZERO, ZERO) == Ordering.EQ
        assert cnf_cmp(OMEGA, w_to((1, 1))) == Ordering.LT
        omega_omega_2 = cnf_mul(w_to((1, 1)), CnfOrdinal.finite(2))
        assert cnf_cmp(cnf_add(omega_omega_2, ONE), omega_omega_2) == Ordering.GT

    def test_addition_absorbs_smaller_terms(self):
        assert cnf_add(ONE, OMEGA) == OMEGA
        assert str(cnf_add(OMEGA, ONE)) == "w+1"

    def test_multiplication(self):
        assert cnf_mul(w_to((1, 1)), w_to((1, 1))) == w_to((1, 2))
        assert cnf_mul(CnfOrdinal.finite(2), OMEGA) == OMEGA
        assert str(cnf_mul(OMEGA, CnfOrdinal.finite(2))) == "w*2"

    def test_malformed_forms_are_rejected(self):
        with pytest.raises(OrdinalDomainError, match="not weakly descending"):
            CnfOrdinal(((), ((0, 1),)))
        with pytest.raises(OrdinalDomainError, match="strictly descending"):
            CnfOrdinal((((0, 1), (1, 1)),))
        with pytest.raises(OrdinalDomainError, match="finite ordinal"):
            CnfOrdinal.finite(-1)

    def test_omega_power_overflow(self):
        assert omega_power(OMEGA) == w_to((1, 1))
        with pytest.raises(OrdinalOverflowError):
            omega_power(w_to((1, 1)))

    @given(ordinals, ordinals, ordinals)
    def test_addition_is_associative(self, a, b, c):
        assert cnf_add(cnf_add(a, b), c) == cnf_add(a, cnf_add(b, c))

    @given(ordinals, ordinals, ordinals)
    def test_multiplication_left_distributes(self, a, b, c):
        assert cnf_mul(a, cnf_add(b, c)) == cnf_add(cnf_mul(a, b), cnf_mul(a, c))

    @given(ordinals, ordinals)
    def test_addition_is_monotone_on_the_right(self, a, b):
        assert cnf_cmp(a, cnf_add(a, b)) != Ordering.GT


class TestHat:
    """The hat map and its inverse."""

    def test_anchors(self):
        assert str(hat(ZERO)) == "0"
        assert str(hat(ONE)) == "w"
        assert str(hat(OMEGA)) == "w1"
        assert str(hat(w_to((1, 1)))) == "u2"

    def test_clause_by_clause_expansion(self):
        xi = cnf_add(cnf_add(cnf_mul(w_to((1, 1)), CnfOrdinal.finite(2)), OMEGA), CnfOrdinal.finite(3))
        assert str(hat(xi)) == "u2*2+w1+w*3"

    def test_unhat_of_parsed_terms(self):
        assert unhat(UTerm.parse("w")) == ONE
        assert unhat(UTerm.parse("w1")) == OMEGA
        expected = cnf_add(cnf_add(w_to((2, 1)), OMEGA), ONE)
        assert unhat(UTerm.parse("u3+w1+w")) == expected

    def test_u_constructor(self):
        assert UTerm.u(1) == UTerm.parse("w1")
        assert str(UTerm.u(3)) == "u3"
        with pytest.raises(OrdinalDomainError, match="n >= 1"):
            UTerm.u(0)

    def test_parse_rejects_non_normal_forms(self):
        with pytest.raises(OrdinalDomainError):
            UTerm.parse("w+u2")
        with pytest.raises(OrdinalDomainError, match="bad factor"):
            UTerm.parse("v2")

    @settings(max_examples=300)
    @given(ordinals, ordinals)
    def test_hat_is_strictly_increasing(self, a, b):
        if a < b:
            assert hat(a).compare(hat(b)) == Ordering.LT
        elif a == b:
            assert hat(a) == hat(b)

    @given(ordinals)
    def test_unhat_inverts_hat(self, xi):
        assert unhat(hat(xi)) == xi

    @given(ordinals)
    def test_rendering_parses_back(self, xi):
        u = hat(xi)
        assert UTerm.parse(str(u)) == u


class TestBk:
    """Brouwer-Kleene comparison."""

    def test_examples(self):
        assert bk_cmp((0,), (1,)) == Ordering.LT
        assert bk_cmp((1, 0), (1,)) == Ordering.LT
        assert bk_cmp((1, 2, 0), (1, 1)) == Ordering.GT
        assert bk_cmp((2,), (2,)) == Ordering.EQ

    def test_nested_sequences(self):
        assert bk_cmp(((0,), (0,)), ((0,),)) == Ordering.LT
        assert bk_cmp(((0, 0),), ((0,),)) == Ordering.LT

    def test_incomparable_atoms(self):
        with pytest.raises(BkDomainError):
            bk_cmp((object(),), (1,))
        with pytest.raises(BkDomainError, match="booleans"):
            bk_cmp((True,), (1,))

    @given(st.lists(st.lists(st.integers(0, 2), min_size=1, max_size=3).map(tuple), unique=True, max_size=8))
    def test_total_order_and_stable_sort(self, seqs):
        ordered = bk_sorted(seqs)
        assert bk_sorted(ordered) == ordered
        for s, t in zip(ordered, ordered[1:]):
            assert bk_cmp(s, t) == Ordering.LT
            assert bk_cmp(t, s) == Ordering.GT

    @given(st.lists(st.integers(0, 2), min_size=1, max_size=3), st.lists(st.integers(0, 2), min_size=1, max_size=3))
    def test_against_the_definition(self, s, t):
        s, t = tuple(s), tuple(t)
        if s == t:
            expected = Ordering.EQ
        elif s[: len(t)] == t:
            expected = Ordering.LT
        elif t[: len(s)] == s:
            expected = Ordering.GT
        else:
            i = next(i for i, (a, b) in enumerate(zip(s, t)) if a != b)
            expected = Ordering.LT if s[i] < t[i] else Ordering.GT
        assert bk_cmp(s, t) == expected
