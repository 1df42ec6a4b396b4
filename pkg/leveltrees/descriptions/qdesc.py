"""Q-descriptions of a level <=2 tree and their corners.

A Q-description is a triple (q, P, p) where P is a level-1 tree and p is a
node sequence. It is of discontinuous type when q is a node of 2Q, of
continuous type when q = q^(-1) for a degree-1 node q, and extended when it is
(q, P_q u {p_q}, p) for a degree-1 node q. Corners realize the order of the
order types: (d, q) < (d', q') iff corner(d, q) <_BK corner(d', q').
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Union

from leveltrees.ordinals.bk import bk_key
from leveltrees.trees.level1 import (
    EMPTY,
    MINUS_ONE,
    ROOT,
    Level1Tree,
    Node,
    NodeOrMinus,
    format_node,
    parent,
)
from leveltrees.trees.level2 import L2Node, Level2Tree, format_l2

logger = logging.getLogger(__name__)


class DescriptionError(ValueError):
    """Raised for malformed descriptions or attributes requested on the wrong type."""
    pass


class DescKind(str, Enum):
    DISCONTINUOUS = "discontinuous"
    CONTINUOUS = "continuous"
    EXTENDED = "extended"


@dataclass(frozen=True)
class QDesc:
    """(q, P, p): a description of 2Q, or an extended one."""

    q: L2Node
    tree: Level1Tree
    nodes: tuple
    kind: DescKind = DescKind.DISCONTINUOUS

    def __post_init__(self) -> None:
        object.__setattr__(self, "q", tuple(a if a == MINUS_ONE else tuple(a) for a in self.q))
        object.__setattr__(self, "nodes", tuple(p if p == MINUS_ONE else tuple(p) for p in self.nodes))

    @property
    def length(self) -> int:
        return len(self.q)

    @property
    def is_continuous(self) -> bool:
        return self.kind == DescKind.CONTINUOUS

    @property
    def is_constant(self) -> bool:
        return not self.q and self.kind == DescKind.DISCONTINUOUS

    @property
    def node_q(self) -> L2Node:
        """The 2Q node behind the description (q without its trailing -1)."""
        return self.q[:-1] if self.is_continuous else self.q

    def restrict(self, l: int) -> "QDesc":
        """(q|l, {p_i : i < l}, (p_i)_{i <= l}), a discontinuous description."""
        if l > self.length or (self.is_continuous and l == self.length):
            raise DescriptionError(f"cannot restrict {self} to length {l}")
        return QDesc(self.q[:l], Level1Tree.of(*self.nodes[:l]), self.nodes[: l + 1])

    def sort_key(self) -> tuple:
        return (bk_key(self.q), self.tree.sort_key(), bk_key(self.nodes), self.kind.value)

    def __str__(self) -> str:
        nodes = ", ".join(format_node(p) for p in self.nodes)
        return f"({format_l2(self.q)}, {self.tree}, ({nodes}))"


CONSTANT = QDesc((), EMPTY, ((0,),))
# The unique description that is ~-equivalent to the constant one.
LEAST_CONTINUOUS = QDesc((MINUS_ONE,), Level1Tree.of((0,)), ((0,),), DescKind.CONTINUOUS)


def discontinuous_desc(Q: Level2Tree, q: L2Node) -> QDesc:
    return QDesc(q, Q.tree_at(q), Q.node_sequence(q))


def continuous_desc(Q: Level2Tree, q: L2Node) -> QDesc:
    entry = Q.entry(q)
    if entry.node == MINUS_ONE:
        raise DescriptionError(f"{format_l2(q)} has degree 0 and no continuous description")
    return QDesc(q + (MINUS_ONE,), entry.completion, Q.node_sequence(q), DescKind.CONTINUOUS)


def extended_desc(Q: Level2Tree, q: L2Node) -> QDesc:
    entry = Q.entry(q)
    if entry.node == MINUS_ONE:
        raise DescriptionError(f"{format_l2(q)} has degree 0 and no extended description")
    return QDesc(q, entry.completion, Q.node_sequence(q), DescKind.EXTENDED)


def desc_q(Q: Level2Tree) -> list[QDesc]:
    """desc(2Q): one discontinuous description per node, one continuous per degree-1 node."""
    out = [discontinuous_desc(Q, q) for q in Q.dom]
    out += [continuous_desc(Q, q) for q in Q.dom if Q.degree(q) == 1]
    return sorted(out, key=lambda x: corner_q(2, x))


def desc_star(Q: Level2Tree) -> list[tuple[int, Union[Node, QDesc]]]:
    """desc*(Q) as (d, x) pairs, <-ascending."""
    items: list[tuple[int, Union[Node, QDesc]]] = [(1, x) for x in Q.t1]
    items += [(2, x) for x in desc_q(Q)]
    items += [(2, extended_desc(Q, q)) for q in Q.dom if Q.degree(q) == 1]
    logger.debug(f"Enumerated {len(items)} members of desc*(Q)")
    return sorted(items, key=lambda dx: corner_q(*dx))


def is_regular(d: int, x: Union[Node, QDesc]) -> bool:
    """Discontinuous and extended descriptions are regular; degree-1 designators are too."""
    return d == 1 or x.kind != DescKind.CONTINUOUS


def corner_q(d: int, x: Union[Node, QDesc]) -> tuple:
    """The corner of (d, x); ranks are positions in the <_BK order of P."""
    if d == 1:
        return (1, x)
    k = x.length
    if x.kind == DescKind.CONTINUOUS:
        pairs = [(x.tree.rank(x.nodes[i]), x.q[i]) for i in range(k - 1)]
        tail = MINUS_ONE
    elif x.kind == DescKind.DISCONTINUOUS:
        pairs = [(x.tree.rank(x.nodes[i]), x.q[i]) for i in range(k)]
        tail = MINUS_ONE
    else:
        pairs = [(x.tree.rank(x.nodes[i]), x.q[i]) for i in range(k)]
        tail = x.tree.rank(x.nodes[k])
    return (2, *[a for pair in pairs for a in pair], tail)


def corner_key(d: int, x: Union[Node, QDesc]) -> tuple:
    return bk_key(corner_q(d, x))


def similar(a: tuple[int, object], b: tuple[int, object]) -> bool:
    return corner_q(*a) == corner_q(*b)


def ucf_level1(tree: Level1Tree, nodes: tuple, continuous: bool) -> NodeOrMinus:
    """Uniform cofinality of the potential partial level <=1 tower (P, p).

    Continuous towers end at a node of P and have it as their cofinality;
    discontinuous ones have the parent of their pending node, or -1.
    """
    if continuous:
        return nodes[-1]
    last = nodes[-1]
    if last == MINUS_ONE:
        return MINUS_ONE
    return parent(last)


def ucf_q(x: QDesc) -> NodeOrMinus:
    return ucf_level1(x.tree, x.nodes, x.is_continuous)


def level1_pred(tree: Level1Tree, x: Node) -> Node | None:
    """pred of x in <^P where the root sits above every node."""
    if x == ROOT:
        return tree.ordered[-1] if tree.nodes else None
    return tree.pred(x)


def level1_min(tree: Level1Tree) -> Node:
    return tree.ordered[0] if tree.nodes else ROOT


def map_desc(pi2: dict, x: QDesc) -> QDesc:
    """Push a description of 2X forward along a factoring of level <=2 trees."""
    if x.is_continuous:
        q = pi2[x.q[:-1]] + (MINUS_ONE,)
    else:
        q = pi2[x.q]
    return QDesc(q, x.tree, x.nodes, x.kind)


def star_cofinality(x: QDesc, continuous: bool) -> tuple[int, QDesc]:
    """The member of desc*(Q) approached by x, given its *-continuity.

    A continuous description drops its trailing -1 and becomes the discontinuous
    description of its node (continuous case) or the extended one. A
    discontinuous description stays put, or is extended by its pending node.
    """
    if x.is_continuous:
        last = x.nodes[x.length - 1]
        if continuous:
            return (2, QDesc(x.q[:-1], Level1Tree(x.tree.nodes - {last}), x.nodes))
        return (2, QDesc(x.q[:-1], x.tree, x.nodes, DescKind.EXTENDED))
    if continuous:
        return (2, x)
    return (2, QDesc(x.q, x.tree.completion(x.nodes[-1]), x.nodes, DescKind.EXTENDED))
