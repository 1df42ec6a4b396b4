"""Symbolic order types of nodes of level-1, level <=2 and level-3 trees.

Positions in rep(Q) are computed as ordinal polynomials in the seed
coordinates. A monomial is a descending tuple of ranks: -1 stands for omega,
an integer r >= 0 for the r-th seed coordinate (which is u_{r+1} at the seed),
and a fraction for a bound coordinate that is summed away. Summing F(gamma)
over the gamma in (lo, hi) keeps the ranks of the leading monomial of F that
are >= hi and multiplies by hi.

A level-3 node r is reached by walking its branch: every prefix contributes
the blocks below its seed coordinate and the subtrees of its lower children.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import floor
from typing import Any, Optional, Union

from leveltrees.ordinals.bk import bk_key
from leveltrees.ordinals.cnf import CnfOrdinal, OrdinalDomainError
from leveltrees.ordinals.uterm import UTerm
from leveltrees.trees.level1 import MINUS_ONE, ROOT, Level1Tree, TreeValidationError
from leveltrees.trees.level2 import L2_ROOT, Level2Tree, format_l2
from leveltrees.trees.level3 import L3_ROOT, Level3Tree

logger = logging.getLogger(__name__)

Monomial = tuple[Fraction, ...]


@dataclass(frozen=True)
class Polynomial:
    """An ordinal polynomial with strictly descending monomials and positive coefficients."""

    terms: tuple[tuple[Monomial, int], ...] = ()

    @classmethod
    def monomial(cls, *ranks: Union[int, Fraction]) -> "Polynomial":
        return cls(((tuple(sorted((Fraction(r) for r in ranks), reverse=True)), 1),))

    @property
    def lead(self) -> Monomial:
        if not self.terms:
            raise OrdinalDomainError("0 has no leading monomial")
        return self.terms[0][0]

    def __add__(self, other: "Polynomial") -> "Polynomial":
        if not other.terms:
            return self
        lead, coeff = other.terms[0]
        kept = tuple((m, c) for m, c in self.terms if m > lead)
        same = sum(c for m, c in self.terms if m == lead)
        return Polynomial(kept + ((lead, coeff + same),) + other.terms[1:])

    def to_uterm(self) -> UTerm:
        """The hat image; the finite part is dropped.

        Raises:
            OrdinalDomainError: If a bound coordinate survived or omega is mixed with seeds
        """
        exponents = []
        for m, c in self.terms:
            if not m:
                continue
            if any(r.denominator != 1 for r in m):
                raise OrdinalDomainError(f"unsummed coordinate in {m}")
            if m == (Fraction(-1),):
                exponents += [()] * c
                continue
            if any(r < 0 for r in m):
                raise OrdinalDomainError(f"monomial {m} mixes omega with seed coordinates")
            pairs: list[tuple[int, int]] = []
            for r in m:
                if pairs and pairs[-1][0] == int(r):
                    pairs[-1] = (int(r), pairs[-1][1] + 1)
                else:
                    pairs.append((int(r), 1))
            exponents += [tuple(pairs)] * c
        return UTerm(CnfOrdinal.from_exponents(exponents))


ZERO_P = Polynomial()
ONE_P = Polynomial.monomial()
OMEGA_P = Polynomial.monomial(-1)


def sum_below(F: Polynomial, hi: Fraction) -> Polynomial:
    """sum_{gamma < hi} F(gamma) for F increasing in gamma."""
    kept = tuple(r for r in F.lead if r >= hi)
    return Polynomial(((kept + (hi,), 1),))


class _Level2Positions:
    """Positions of the points of rep(Q) for one level <=2 tree."""

    def __init__(self, Q: Level2Tree):
        self.Q = Q

    def _range(self, q: tuple, env: dict, root: Fraction) -> tuple[Fraction, Fraction]:
        entry = self.Q.entry(q)
        below = entry.tree.lower_neighbour(entry.node)
        above = entry.tree.upper_neighbour(entry.node)
        lo = Fraction(-1) if below is None else env[below]
        hi = root if above == ROOT else env[above]
        return lo, hi

    def size(self, q: tuple, env: dict, root: Fraction) -> Polynomial:
        return ONE_P + self.inner(q, env, root)

    def inner(self, q: tuple, env: dict, root: Fraction) -> Polynomial:
        """Points strictly below the point of q itself, inside its own block."""
        if self.Q.node_at(q) == MINUS_ONE:
            return OMEGA_P
        lo, hi = self._range(q, env, root)
        return sum_below(self.block(q, env, (lo + hi) / 2, root), hi)

    def block(self, q: tuple, env: dict, gamma: Fraction, root: Fraction) -> Polynomial:
        inner_env = {**env, self.Q.node_at(q): gamma}
        total = ONE_P
        for c in self.Q.children(q):
            total = total + self.size(q + (c,), inner_env, root)
        return total

    def position(self, q: tuple) -> Polynomial:
        """[[2, q]]: the degree-1 points, then the blocks passed along the branch of q."""
        Q = self.Q
        frame = Q.tree_at(q)
        env = {p: Fraction(frame.rank(p)) for p in frame}
        root = Fraction(len(frame))
        n = len(Q.t1)
        total = Polynomial((((Fraction(-1),), n),)) if n else ZERO_P
        for i in range(len(q)):
            up = q[:i]
            p = Q.node_at(up)
            below = Q.tree_at(up).lower_neighbour(p)
            lo = Fraction(-1) if below is None else env[below]
            a = env[p]
            total = total + sum_below(self.block(up, env, (lo + a) / 2, root), a)
            lower = ONE_P
            for c in Q.children(up):
                if bk_key(c) < bk_key(q[i]):
                    lower = lower + self.size(up + (c,), env, root)
            total = total + lower
        return total + self.inner(q, env, root)


class _Level3Positions:
    """Positions in rep(R) for the nodes of a level-3 tree."""

    def __init__(self, R: Level3Tree):
        self.R = R
        # derived coordinate -> (the bound coordinate it is computed from, its ceiling)
        self.derived: dict[Fraction, tuple[Fraction, Fraction]] = {}

    def _ceiling(self, r: tuple, env: dict) -> Fraction:
        delta = self.R.delta_at(r)
        if delta.degree == 1:
            x = delta.q
            return env.get((1, x[:-1]), Fraction(0)) if len(x) > 1 else Fraction(0)
        c = Fraction(len(delta.tree))
        q = delta.q
        last = q[-1]
        if len(last) > 1:
            return env.get((2, q[:-1] + (last[:-1],)), c)
        if len(q) == 1:
            return c
        base = env.get((2, q[:-1]))
        if base is None:
            return c
        rank = (c - 1) + (base - floor(base))
        if not c - 1 < rank < c:
            rank = c - Fraction(1, 2)
        self.derived[rank] = (base, c)
        return rank

    def size(self, r: tuple, env: dict) -> Polynomial:
        return ONE_P + self.inner(r, env)

    def _block(self, r: tuple, env: dict) -> Polynomial:
        block = ONE_P
        for a in self.R.children(r):
            block = block + self.size(r + (a,), env)
        return block

    def _bound(self, r: tuple, env: dict) -> tuple[Fraction, Fraction]:
        """The seed coordinate of r and a bound coordinate just below it."""
        hi = self._ceiling(r, env)
        return hi, hi - Fraction(1, 2 ** (len(env) + 1))

    def inner(self, r: tuple, env: dict) -> Polynomial:
        delta = self.R.delta_at(r)
        if delta.degree == 0:
            return OMEGA_P
        hi, gamma = self._bound(r, env)
        block = self._block(r, {**env, delta.dnode: gamma})
        lead = block.lead
        if any(self.derived.get(x, (None,))[0] == gamma for x in lead):
            lifted = sorted((self.derived[x][1] if self.derived.get(x, (None,))[0] == gamma else x for x in lead), reverse=True)
            return Polynomial(((tuple(x for x in lifted if x >= hi), 1),))
        return sum_below(block, hi)

    def strict(self, r: tuple, env: dict) -> Polynomial:
        """The blocks of r below its seed coordinate; coordinates derived from the bound one count at their floor."""
        delta = self.R.delta_at(r)
        if delta.degree == 0:
            return OMEGA_P
        hi, gamma = self._bound(r, env)
        block = self._block(r, {**env, delta.dnode: gamma})
        lead = tuple(
            sorted((Fraction(floor(x)) if self.derived.get(x, (None,))[0] == gamma else x for x in block.lead), reverse=True)
        )
        return sum_below(Polynomial(((lead, 1),)), hi)

    def _lift(self, total: Polynomial) -> Polynomial:
        """Replace derived coordinates left in ``total`` by their ceilings."""
        out = ZERO_P
        for m, c in total.terms:
            lifted = sorted((self.derived[x][1] if x in self.derived else x for x in m), reverse=True)
            out = out + Polynomial(((tuple(lifted), c),))
        return out

    def position(self, r: tuple) -> Polynomial:
        """[[r]]: earlier tops, then along the branch of r the blocks below each seed coordinate and the lower siblings."""
        tops = [t for t in self.R.dom if len(t) == 1]
        if not r:
            total = ZERO_P
            for t in tops:
                total = total + self.size(t, {})
            return total
        if r not in self.R:
            raise TreeValidationError(f"{format_l2(r)} is not in the domain of R")
        total = ZERO_P
        for t in tops:
            if bk_key(t) < bk_key(r[:1]):
                total = total + self.size(t, {})
        if len(r) == 1:
            return self._lift(total + self.inner(r, {}))
        env: dict = {}
        for i in range(1, len(r)):
            up = r[:i]
            total = total + self.strict(up, env)
            env = {**env, self.R.delta_at(up).dnode: self._ceiling(up, env)}
            for c in self.R.children(up):
                if bk_key(c) < bk_key(r[i]):
                    total = total + self.size(up + (c,), env)
        total = total + self.strict(r, env)
        if self.R.delta_at(r).degree:
            # children of r at its seed coordinate
            seed = {**env, self.R.delta_at(r).dnode: self._ceiling(r, env)}
            for c in self.R.children(r):
                total = total + self.size(r + (c,), seed)
        return self._lift(total)


@lru_cache(maxsize=4096)
def node_otype(tree: Union[Level1Tree, Level2Tree, Level3Tree], node: Optional[Any] = None) -> UTerm:
    """[[node]] in its tree; ``node`` None stands for the root.

    Level-1 nodes are given as sequences, level <=2 nodes as (d, x) pairs and
    level-3 nodes as label sequences.
    """
    if isinstance(tree, Level1Tree):
        if node is None:
            return UTerm.omega(len(tree) + 1)
        return UTerm.omega(tree.rank(tuple(node)) + 1)
    if isinstance(tree, Level2Tree):
        d, x = (2, L2_ROOT) if node is None else node
        if d == 1:
            return UTerm.omega(tree.t1.rank(tuple(x)) + 1)
        q = tuple(tuple(a) for a in x)
        if q not in tree:
            raise TreeValidationError(f"{format_l2(q)} is not in the domain of 2Q")
        value = _Level2Positions(tree).position(q).to_uterm()
    else:
        r = L3_ROOT if node is None else tuple(tuple(a) for a in node)
        value = _Level3Positions(tree).position(r).to_uterm()
    logger.debug(f"Order type of {node} is {value}")
    return value
