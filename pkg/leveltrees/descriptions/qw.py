"""(Q,W)-descriptions, their attributes and the level-1 tensor Q (x) W.

A (Q,W)-description is (1, q, {}) for q in 1Q, or (2, q, sigma) for a
description q = (q, P, p) of 2Q and a <_BK-preserving injection sigma of P
into W. Corners are (1, q) and (2, sigma (+) q), where
sigma (+) q = (sigma(p_0), q(0), ..., sigma(p_{k-1}), q(k-1)).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from math import comb
from typing import Any, Callable, Iterable, Mapping, Optional, Sequence, Union

from leveltrees.descriptions.qdesc import (
    CONSTANT,
    LEAST_CONTINUOUS,
    DescKind,
    DescriptionError,
    QDesc,
    corner_key,
    desc_q,
    desc_star,
    level1_min,
    level1_pred,
    map_desc,
    star_cofinality,
    ucf_q,
)
from leveltrees.ordinals.bk import bk_key
from leveltrees.ordinals.uterm import UTerm
from leveltrees.trees.level1 import (
    MINUS_ONE,
    ROOT,
    Level1Tree,
    Node,
    NodeOrMinus,
    format_node,
    parent,
)
from leveltrees.trees.level2 import Level2Tree

logger = logging.getLogger(__name__)


class FactoringError(ValueError):
    """Raised when a factoring map violates its defining clauses."""
    pass


def _freeze_map(pairs: Union[Mapping, Iterable]) -> tuple:
    items = pairs.items() if isinstance(pairs, Mapping) else pairs
    return tuple(sorted(((tuple(k), v if v == MINUS_ONE else tuple(v)) for k, v in items), key=lambda kv: bk_key(kv[0])))


@dataclass(frozen=True)
class QWDesc:
    """A (Q,W)-description (d, q, sigma); for d = 1 ``q`` is a node of 1Q."""

    degree: int
    q: Any
    sigma: tuple = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "sigma", _freeze_map(self.sigma))
        if self.degree == 1:
            object.__setattr__(self, "q", tuple(self.q))
            if self.sigma:
                raise DescriptionError(f"degree-1 description {self.q} carries a map")
        elif self.degree == 2:
            if not isinstance(self.q, QDesc) or self.q.kind == DescKind.EXTENDED:
                raise DescriptionError(f"{self.q} is not a description of 2Q")
            if {k for k, _ in self.sigma} != set(self.q.tree.nodes):
                raise DescriptionError(f"map domain does not match {self.q.tree}")
        else:
            raise DescriptionError(f"degree must be 1 or 2, got {self.degree}")

    @cached_property
    def sigma_map(self) -> dict:
        return {ROOT: ROOT, **dict(self.sigma)}

    @property
    def is_constant(self) -> bool:
        return self.degree == 2 and self.q.is_constant

    @property
    def length(self) -> int:
        if self.degree != 2:
            raise DescriptionError("degree-1 descriptions have no length")
        return self.q.length

    @cached_property
    def corner(self) -> tuple:
        if self.degree == 1:
            return (1, self.q)
        x = self.q
        body: list = []
        for i in range(x.length):
            body += [self.sigma_map[x.nodes[i]], x.q[i]]
        return (2, tuple(body))

    def sort_key(self) -> tuple:
        return bk_key(self.corner)

    @property
    def sign(self) -> tuple:
        if self.degree == 1:
            return ()
        return tuple(self.sigma_map[self.q.nodes[i]] for i in range(self.q.length))

    @property
    def is_continuous(self) -> bool:
        return self.degree == 2 and self.q.is_continuous

    @property
    def ucf(self) -> NodeOrMinus:
        if self.degree == 1:
            return MINUS_ONE
        u = ucf_q(self.q)
        return MINUS_ONE if u == MINUS_ONE else self.sigma_map[u]

    @property
    def sign_star(self) -> tuple:
        if self.degree == 1:
            return ((1, self.q),)
        x = self.q
        top = x.length - 1 if x.is_continuous else x.length
        return tuple((2, x.q[:i]) for i in range(1, top + 1))

    def is_star_continuous(self, W: Level1Tree) -> bool:
        """*-W-continuity: the predecessor of sigma(ucf) in <^W is hit by sigma."""
        if self.degree == 1:
            return True
        u = ucf_q(self.q)
        if u == MINUS_ONE:
            return True
        w = self.sigma_map[u]
        if w == level1_min(W):
            return True
        below = level1_pred(W, w)
        return below is not None and below in self.sigma_map.values()

    def ucf_star(self, W: Level1Tree) -> tuple[int, Any]:
        """The *-W-uniform cofinality, a member of desc*(Q)."""
        if self.degree == 1:
            return (1, self.q)
        return star_cofinality(self.q, self.is_star_continuous(W))

    @property
    def is_direct(self) -> bool:
        return self.degree == 1 or all(p == w for p, w in self.sigma)

    def restrict(self, l: int) -> "QWDesc":
        """D|l = (2, q|l, sigma restricted to {p_i : i < l})."""
        x = self.q.restrict(l)
        return QWDesc(2, x, {p: self.sigma_map[p] for p in x.tree.nodes})

    @property
    def minus(self) -> "QWDesc":
        return self.restrict(self.length - 1)

    def is_initial_segment_of(self, other: "QWDesc") -> bool:
        if self.degree != 2 or other.degree != 2:
            return False
        return any(other.restrict(l) == self for l in range(other.length))

    def __str__(self) -> str:
        return render_qw(self)


CONSTANT_QW = QWDesc(2, CONSTANT, ())


def _maps(tree: Level1Tree, W: Level1Tree) -> Iterable[dict]:
    """All <_BK-preserving injections of ``tree`` into W."""
    for image in combinations(W.ordered, len(tree)):
        yield dict(zip(tree.ordered, image))


def enum_desc_qw(Q: Level2Tree, W: Level1Tree, descending: bool = True) -> list[QWDesc]:
    """desc(Q, W), sorted by corners (descending by default, like the listings)."""
    out = [QWDesc(1, x) for x in Q.t1]
    for x in desc_q(Q):
        out += [QWDesc(2, x, sigma) for sigma in _maps(x.tree, W)]
    out.sort(key=QWDesc.sort_key, reverse=descending)
    logger.debug(f"Enumerated {len(out)} (Q,W)-descriptions")
    return out


def count_desc_qw(Q: Level2Tree, W: Level1Tree) -> int:
    """Closed formula: card(1Q) + sum C(|W|, lh q) + sum over degree-1 q of C(|W|, lh q + 1)."""
    n = len(W)
    total = len(Q.t1) + sum(comb(n, len(q)) for q in Q.dom)
    return total + sum(comb(n, len(q) + 1) for q in Q.dom if Q.degree(q) == 1)


def least_degree2(W: Level1Tree) -> QWDesc:
    """D_W = (2, ((-1), {(0)}, ((0))), (0) -> least node of W)."""
    if not W.nodes:
        raise DescriptionError("D_W needs a nonempty W")
    return QWDesc(2, LEAST_CONTINUOUS, {(0,): W.ordered[0]})


def prec(a: Any, b: Any) -> bool:
    return a.sort_key() < b.sort_key()


def similar(a: Any, b: Any) -> bool:
    return a.corner == b.corner


def immediate_successor(x: Any, targets: Sequence, key: Callable = lambda d: d.sort_key()) -> Any:
    """The least member of ``targets`` strictly above x with nothing in between.

    Raises:
        DescriptionError: If x is already among the targets, or nothing lies above it
    """
    kx = key(x)
    if any(key(t) == kx for t in targets):
        raise DescriptionError(f"{x} already belongs to the target set")
    above = [t for t in targets if key(t) > kx]
    if not above:
        raise DescriptionError(f"nothing in the target set lies above {x}")
    return min(above, key=key)


def immediate_predecessor(x: Any, targets: Sequence, key: Callable = lambda d: d.sort_key()) -> Optional[Any]:
    below = [t for t in targets if key(t) < key(x)]
    return max(below, key=key) if below else None


def restrict_node(w: Node, W: Level1Tree) -> Node:
    """w' | W: the least node of W (or the root) that is <_BK above w'."""
    if w in W:
        raise DescriptionError(f"{format_node(w)} already belongs to {W}")
    return W.upper_neighbour(w)


def restrict_qw(D: QWDesc, Q: Level2Tree, W: Level1Tree) -> QWDesc:
    """D' | (Q, W) for a smaller W or a smaller Q, by the immediate-successor clause."""
    return immediate_successor(D, enum_desc_qw(Q, W))


def restrict_star(d: int, x: Any, Q: Level2Tree) -> tuple[int, Any]:
    """(d', q') | Q over desc*(Q)."""
    return immediate_successor((d, x), desc_star(Q), key=lambda dx: corner_key(*dx))


def contraction(seqs: Sequence[Sequence]) -> tuple[tuple, tuple]:
    """Deduplicate the concatenation of ``seqs`` in first-occurrence order.

    Returns:
        The contracted sequence and, for each of its members, the index pair
        (i, j) of its first occurrence.
    """
    out: list = []
    index: list = []
    seen: set = set()
    for i, seq in enumerate(seqs):
        for j, a in enumerate(seq):
            if a not in seen:
                seen.add(a)
                out.append(a)
                index.append((i, j))
    return tuple(out), tuple(index)


@dataclass(frozen=True)
class FactorSQW:
    """A map tau from S u {root} into (Q,*)-descriptions."""

    tree: Level1Tree
    values: tuple = field(default=())

    def __post_init__(self) -> None:
        items = self.values.items() if isinstance(self.values, Mapping) else self.values
        frozen = tuple(sorted(((tuple(s), d) for s, d in items if tuple(s) != ROOT), key=lambda kv: bk_key(kv[0])))
        object.__setattr__(self, "values", frozen)

    @cached_property
    def table(self) -> dict:
        return {ROOT: CONSTANT_QW, **dict(self.values)}

    def __call__(self, s: Node) -> QWDesc:
        try:
            return self.table[s]
        except KeyError:
            raise FactoringError(f"{format_node(s)} is not in the domain of the map") from None

    def restrict(self, tree: Level1Tree) -> "FactorSQW":
        return FactorSQW(tree, {s: self.table[s] for s in tree.nodes})

    @property
    def range(self) -> list[QWDesc]:
        return [d for _, d in self.values]

    def sort_key(self) -> tuple:
        return tuple((bk_key(s), d.sort_key()) for s, d in self.values)


def factor_check_sqw(tau: FactorSQW, Q: Level2Tree, W: Optional[Level1Tree] = None) -> bool:
    """tau factors (S, Q, W): constant at the root, strictly monotone, and (given W) into desc(Q, W)."""
    if tau(ROOT) != CONSTANT_QW or set(tau.table) != set(tau.tree.nodes) | {ROOT}:
        return False
    ordered = [tau(s) for s in tau.tree.ordered] + [CONSTANT_QW]
    if any(not prec(a, b) for a, b in zip(ordered, ordered[1:])):
        return False
    if W is None:
        return True
    universe = {d.corner for d in enum_desc_qw(Q, W)}
    return all(d.corner in universe and _maps_into(d, W) for d in ordered)


def _maps_into(d: QWDesc, W: Level1Tree) -> bool:
    return all(w in W for _, w in d.sigma)


def increasing_maps(tree: Level1Tree, universe: Sequence[QWDesc]) -> Iterable[FactorSQW]:
    """All (S, Q, *)-factorings of ``tree`` into ``universe`` (non-constant members only)."""
    pool = sorted((d for d in universe if not d.is_constant), key=QWDesc.sort_key)
    for image in combinations(pool, len(tree)):
        yield FactorSQW(tree, dict(zip(tree.ordered, image)))


@dataclass(frozen=True)
class QWTensor:
    """A representation (S, tau) of Q (x) W; node (i) is the i-th <-least non-constant description."""

    tree: Level1Tree
    tau: FactorSQW
    descriptions: tuple

    def node_of(self, d: QWDesc) -> Node:
        for s, e in self.tau.values:
            if e.corner == d.corner:
                return s
        raise DescriptionError(f"{d} is not a node of the tensor product")

    def seed(self, s: Node) -> UTerm:
        """seed of the k-th <-least description is u_{k+1}."""
        return UTerm.u(self.tree.rank(s) + 1)


def tensor_qw(Q: Level2Tree, W: Level1Tree) -> QWTensor:
    ascending = enum_desc_qw(Q, W, descending=False)
    nodes = [d for d in ascending if not d.is_constant]
    tree = Level1Tree.of(*[(i,) for i in range(len(nodes))])
    tau = FactorSQW(tree, {(i,): d for i, d in enumerate(nodes)})
    logger.debug(f"Q (x) W has {len(nodes)} nodes")
    return QWTensor(tree, tau, tuple(ascending))


def id_star(S: Level1Tree) -> FactorSQW:
    """id_{*,S}: s -> (2, ((-1), {(0)}, ((0))), (0) -> s), factoring (S, Q^0, S)."""
    return FactorSQW(S, {s: QWDesc(2, LEAST_CONTINUOUS, {(0,): s}) for s in S.nodes})


def tensor_map(pi2: Mapping, D: QWDesc, pi1: Optional[Mapping] = None) -> QWDesc:
    """(pi (x) W)(d, q, sigma) = (d, pi(q), sigma)."""
    if D.degree == 1:
        return QWDesc(1, D.q if pi1 is None else pi1[D.q])
    return QWDesc(2, map_desc(dict(pi2), D.q), D.sigma)


def cf_q(Q: Level2Tree, d: int, q: Any) -> int:
    """cf^Q(d, q): 0 for degree 1 or a degree-0 node, 1 if the cofinality is the least node of P_q, else 2."""
    if d == 1:
        return 0
    entry = Q.entry(q)
    if entry.node == MINUS_ONE:
        return 0
    u = parent(entry.node)
    return 1 if u == level1_min(entry.tree) else 2


def render_alpha(w: NodeOrMinus) -> str:
    if w == MINUS_ONE:
        return "-1"
    return "a_" + format_node(w)


def render_qw(D: QWDesc, alpha: Callable[[Node], str] = render_alpha) -> str:
    """Listing text: (2, (a_(1), (0), a_(0), -1)) or (1, ((0)))."""
    if D.degree == 1:
        return f"(1, ({format_node(D.q)}))"
    parts = []
    for i, a in enumerate(D.corner[1]):
        parts.append(alpha(a) if i % 2 == 0 else format_node(a))
    if not parts:
        return "(2, ())"
    return "(2, (" + ", ".join(parts) + "))"
