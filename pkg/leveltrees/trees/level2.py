"""Level <=2 trees.

A level <=2 tree Q is a pair (1Q, 2Q): a level-1 tree and a finite tree of
label sequences whose entries q -> (P_q, p_q) are partial level-1 trees. The
root entry is (empty tree, (0)); a child q^(a) exists only when p_q != -1, and
then P_{q^(a)} = P_q u {p_q}.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Union

from leveltrees.models import Violation
from leveltrees.ordinals.bk import bk_key
from leveltrees.trees.level1 import (
    EMPTY,
    MINUS_ONE,
    Level1Tower,
    Level1Tree,
    Node,
    NodeOrMinus,
    TreeValidationError,
    format_node,
    validate_level1,
)

logger = logging.getLogger(__name__)

Label = tuple[int, ...]
# A level-2 node is a sequence of labels; description nodes may end in -1.
L2Node = tuple[Union[Label, int], ...]
L2_ROOT: L2Node = ()


def format_l2(q: L2Node) -> str:
    return "(" + ", ".join(format_node(a) for a in q) + ")"


@dataclass(frozen=True)
class Entry:
    """A partial level-1 tree (P, p) with p = -1 or a legal new node of P."""

    tree: Level1Tree
    node: NodeOrMinus

    def __post_init__(self) -> None:
        if isinstance(self.node, (list, tuple)):
            object.__setattr__(self, "node", tuple(self.node))

    @property
    def degree(self) -> int:
        return 0 if self.node == MINUS_ONE else 1

    @property
    def completion(self) -> Level1Tree:
        return self.tree.completion(self.node)

    def sort_key(self) -> tuple:
        node = (0,) if self.node == MINUS_ONE else (1, bk_key(self.node))
        return (self.tree.sort_key(), node)

    def __str__(self) -> str:
        return f"({self.tree}, {format_node(self.node)})"


ROOT_ENTRY = Entry(EMPTY, (0,))


@dataclass(frozen=True)
class Level2Tree:
    """A finite level <=2 tree; ``entries`` is kept <_BK ascending by node."""

    t1: Level1Tree = EMPTY
    entries: tuple = ((L2_ROOT, ROOT_ENTRY),)

    def __post_init__(self) -> None:
        items = self.entries.items() if isinstance(self.entries, Mapping) else self.entries
        normalized = tuple(sorted(((tuple(tuple(a) for a in q), e) for q, e in items), key=lambda kv: bk_key(kv[0])))
        object.__setattr__(self, "entries", normalized)

    @classmethod
    def build(cls, t1: Iterable[Iterable[int]], t2: Mapping) -> "Level2Tree":
        """Build from plain nodes; ``t2`` maps non-root nodes to (tree nodes, node) pairs."""
        table = {L2_ROOT: ROOT_ENTRY}
        for q, (tree, node) in t2.items():
            table[tuple(tuple(a) for a in q)] = Entry(Level1Tree.of(*tree), node if node == MINUS_ONE else tuple(node))
        return cls(Level1Tree.of(*t1), tuple(table.items()))

    @cached_property
    def table(self) -> dict[L2Node, Entry]:
        return dict(self.entries)

    @cached_property
    def dom(self) -> tuple[L2Node, ...]:
        return tuple(q for q, _ in self.entries)

    def __contains__(self, q: object) -> bool:
        return q in self.table

    def __iter__(self) -> Iterator[L2Node]:
        return iter(self.dom)

    def __len__(self) -> int:
        """Cardinality counts 1Q and every node of 2Q, root included."""
        return len(self.t1) + len(self.dom)

    def entry(self, q: L2Node) -> Entry:
        try:
            return self.table[q]
        except KeyError:
            raise TreeValidationError(f"{format_l2(q)} is not in the domain of 2Q") from None

    def tree_at(self, q: L2Node) -> Level1Tree:
        return self.entry(q).tree

    def node_at(self, q: L2Node) -> NodeOrMinus:
        return self.entry(q).node

    def degree(self, q: L2Node) -> int:
        return self.entry(q).degree

    def children(self, q: L2Node) -> list[Label]:
        return sorted((x[-1] for x in self.dom if len(x) == len(q) + 1 and x[: len(q)] == q), key=bk_key)

    def node_sequence(self, q: L2Node) -> tuple[NodeOrMinus, ...]:
        """(p_{q|0}, ..., p_q): the node components along the branch of q."""
        return tuple(self.node_at(q[:i]) for i in range(len(q) + 1))

    def tower_at(self, q: L2Node) -> Level1Tower:
        """2Q[q] = (P_q, (p_{q|0}, ..., p_q))."""
        return Level1Tower(self.node_sequence(q))

    def label_tree(self, q: L2Node) -> Level1Tree:
        """2Q{q}: the child labels of q, which form a level-1 tree."""
        return Level1Tree(frozenset(self.children(q)))

    def new_labels(self, q: L2Node) -> list[Label]:
        """Labels a for which q^(a) is a legal new node, <_BK ascending."""
        return self.label_tree(q).new_nodes()

    def lower_siblings(self, q: L2Node) -> list[Label]:
        """Labels a <_BK q[-1] with q[:-1]^(a) in the domain; q itself need not be."""
        return [a for a in self.children(q[:-1]) if bk_key(a) < bk_key(q[-1])]

    def restricted(self, t1: Iterable[Node], dom: Iterable[L2Node]) -> "Level2Tree":
        """The subtree keeping the given 1Q nodes and 2Q nodes (the root always stays)."""
        keep = set(dom) | {L2_ROOT}
        return Level2Tree(Level1Tree.of(*t1), tuple((q, e) for q, e in self.entries if q in keep))

    def node_choices(self, q: L2Node) -> list[NodeOrMinus]:
        """Legal node components for a new entry hung below q[:-1], <_BK ascending, -1 last.

        Non-root entries never take a child of the root as their node component.
        """
        P = self.entry(q[:-1]).completion
        return [p for p in P.new_nodes() if len(p) > 1] + [MINUS_ONE]

    def sort_key(self) -> tuple:
        return (self.t1.sort_key(), tuple((bk_key(q), e.sort_key()) for q, e in self.entries))

    def with_t1(self, x: Node) -> "Level2Tree":
        return Level2Tree(self.t1.with_node(x), self.entries)

    def with_entry(self, q: L2Node, entry: Entry) -> "Level2Tree":
        return Level2Tree(self.t1, self.entries + ((q, entry),))

    def is_subtree_of(self, other: "Level2Tree") -> bool:
        if not self.t1.is_subtree_of(other.t1):
            return False
        return all(q in other.table and other.table[q] == e for q, e in self.entries)

    def __str__(self) -> str:
        body = ", ".join(f"{format_l2(q)}: {e}" for q, e in self.entries)
        return f"Q(1: {self.t1}; 2: {{{body}}})"


Q0 = Level2Tree()


def validate_level2(tree: Level2Tree, regular: bool = True) -> list[Violation]:
    """Check the level-1 part, the root entry and branch coherence of every entry."""
    violations = [
        Violation(node=f"1:{v.node}", rule=v.rule, message=v.message) for v in validate_level1(tree.t1, regular)
    ]
    table = tree.table
    if table.get(L2_ROOT) != ROOT_ENTRY:
        violations.append(Violation(node="2:()", rule="root entry", message="root entry must be ({}, (0))"))
    for q, e in tree.entries:
        name = f"2:{format_l2(q)}"
        for v in validate_level1(e.tree, regular):
            violations.append(Violation(node=name, rule=f"tree {v.rule}", message=v.message))
        if e.node != MINUS_ONE and not e.tree.is_new_node(e.node, regular):
            violations.append(
                Violation(node=name, rule="node component", message=f"{format_node(e.node)} is not a legal new node of {e.tree}")
            )
        if not q:
            continue
        if e.node != MINUS_ONE and len(e.node) == 1:
            violations.append(
                Violation(node=name, rule="node component", message=f"{format_node(e.node)} is a child of the root")
            )
        if any(label == MINUS_ONE or not isinstance(label, tuple) for label in q):
            violations.append(Violation(node=name, rule="label", message="labels must be sequences"))
            continue
        up = q[:-1]
        if up not in table:
            violations.append(Violation(node=name, rule="closed", message=f"parent {format_l2(up)} missing"))
            continue
        parent_entry = table[up]
        if parent_entry.node == MINUS_ONE:
            violations.append(Violation(node=name, rule="coherence", message=f"parent {format_l2(up)} has node -1"))
            continue
        if e.tree != parent_entry.completion:
            violations.append(
                Violation(
                    node=name,
                    rule="coherence",
                    message=f"tree {e.tree} is not the completion {parent_entry.completion} of the parent entry",
                )
            )
    for q in tree.dom:
        for v in validate_level1(tree.label_tree(q), regular):
            violations.append(Violation(node=f"2:{format_l2(q)}", rule=f"labels {v.rule}", message=v.message))
    if violations:
        logger.debug(f"Level <=2 tree has {len(violations)} violations")
    return violations


@dataclass(frozen=True)
class Level2Factoring:
    """A factoring pi of (Q, T): 1pi on 1Q and 2pi on dom(2Q), the root going to the root."""

    source: Level2Tree
    target: Level2Tree
    one: tuple = ()
    two: tuple = ()

    def __post_init__(self) -> None:
        one = self.one.items() if isinstance(self.one, Mapping) else self.one
        two = self.two.items() if isinstance(self.two, Mapping) else self.two
        object.__setattr__(self, "one", tuple(sorted(((tuple(x), tuple(t)) for x, t in one), key=lambda kv: bk_key(kv[0]))))
        frozen = {tuple(tuple(a) for a in q): tuple(tuple(a) for a in t) for q, t in two}
        frozen.setdefault(L2_ROOT, L2_ROOT)
        object.__setattr__(self, "two", tuple(sorted(frozen.items(), key=lambda kv: bk_key(kv[0]))))

    @classmethod
    def identity(cls, Q: Level2Tree) -> "Level2Factoring":
        return cls(Q, Q, {x: x for x in Q.t1}, {q: q for q in Q.dom})

    @cached_property
    def map1(self) -> dict[Node, Node]:
        return dict(self.one)

    @cached_property
    def map2(self) -> dict[L2Node, L2Node]:
        return dict(self.two)

    def __call__(self, d: int, x: tuple) -> tuple[int, tuple]:
        table = self.map1 if d == 1 else self.map2
        try:
            return (d, table[tuple(x)])
        except KeyError:
            raise TreeValidationError(f"({d}, {x}) is not in the domain of the factoring") from None

    def range(self, d: int) -> set:
        return set((self.map1 if d == 1 else self.map2).values())


def factor_check_l2(pi: Level2Factoring) -> bool:
    """pi factors (Q, T): 1pi strictly <_BK-increasing, 2pi preserving lengths,
    prefixes, sibling order and entries."""
    Q, T = pi.source, pi.target
    if set(pi.map1) != set(Q.t1.nodes) or set(pi.map2) != set(Q.dom):
        return False
    images = [pi.map1[x] for x in Q.t1.ordered]
    if any(t not in T.t1 for t in images) or any(bk_key(a) >= bk_key(b) for a, b in zip(images, images[1:])):
        return False
    for q, t in pi.map2.items():
        if t not in T or len(t) != len(q) or T.entry(t) != Q.entry(q):
            return False
        if q and pi.map2[q[:-1]] != t[:-1]:
            return False
    for q in Q.dom:
        kids = Q.children(q)
        mapped = [pi.map2[q + (a,)][-1] for a in kids]
        if any(bk_key(a) >= bk_key(b) for a, b in zip(mapped, mapped[1:])):
            return False
    return True
