"""Deltas, partial level <=2 trees and potential partial level <=2 towers.

A partial level <=2 tree (Q, (d, q, P)) names one new node of Q: nothing for
d = 0, a level-1 node q for d = 1, or a node q of 2Q with tree component P for
d = 2. Its uniform cofinality is read off the position of q: a new degree-1
node is cofinal in its parent (or in the constant description when it hangs
from the root), a new degree-2 node with a nested label is cofinal in the
discontinuous description of its label parent, and one with a top-level label
in the extended description of its parent.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Optional

from leveltrees.descriptions.qdesc import (
    CONSTANT,
    DescKind,
    DescriptionError,
    continuous_desc,
    discontinuous_desc,
    extended_desc,
)
from leveltrees.descriptions.qw import QWDesc, enum_desc_qw
from leveltrees.ordinals.bk import bk_key
from leveltrees.trees.level1 import (
    EMPTY,
    MINUS_ONE,
    ROOT,
    Level1Tree,
    TreeValidationError,
    format_node,
)
from leveltrees.trees.level2 import Entry, Level2Tree, format_l2

logger = logging.getLogger(__name__)

# ucf values: (0, -1), (1, level-1 node) or (2, QDesc).
Designator = tuple[int, Any]
ZERO_UCF: Designator = (0, MINUS_ONE)


@dataclass(frozen=True)
class Delta:
    """(d, q, P): the pending node of a partial level <=2 tree."""

    degree: int
    q: Any = MINUS_ONE
    tree: Level1Tree = EMPTY

    def __post_init__(self) -> None:
        if self.degree == 0:
            if self.q != MINUS_ONE or self.tree.nodes:
                raise TreeValidationError(f"a degree-0 delta is (0, -1, {{}}), got ({self.q}, {self.tree})")
        elif self.degree == 1:
            object.__setattr__(self, "q", tuple(self.q))
            if self.tree.nodes:
                raise TreeValidationError(f"a degree-1 delta has an empty tree, got {self.tree}")
        elif self.degree == 2:
            object.__setattr__(self, "q", tuple(tuple(a) for a in self.q))
            if not self.q:
                raise TreeValidationError("a degree-2 delta cannot name the root")
        else:
            raise TreeValidationError(f"degree must be 0, 1 or 2, got {self.degree}")

    @property
    def dnode(self) -> tuple[int, Any]:
        return (self.degree, self.q)

    def sort_key(self) -> tuple:
        q = (0,) if self.degree == 0 else (1, bk_key(self.q))
        return (self.degree, q, self.tree.sort_key())

    def __str__(self) -> str:
        q = "-1" if self.degree == 0 else (format_node(self.q) if self.degree == 1 else format_l2(self.q))
        return f"({self.degree}, {q}, {self.tree})"


ZERO_DELTA = Delta(0)


def delta_problems(Q: Level2Tree, delta: Delta) -> list[str]:
    """Reasons why ``delta`` does not name a legal new node of Q; empty when it does."""
    if delta.degree == 0:
        return []
    if delta.degree == 1:
        return [] if Q.t1.is_new_node(delta.q) else [f"{format_node(delta.q)} is not a legal new node of 1Q"]
    q = delta.q
    up = q[:-1]
    if q in Q or up not in Q:
        return [f"{format_l2(q)} does not hang from dom(2Q)"]
    parent_entry = Q.entry(up)
    problems = []
    if parent_entry.node == MINUS_ONE:
        problems.append(f"parent {format_l2(up)} has degree 0")
    elif delta.tree != parent_entry.completion:
        problems.append(f"tree {delta.tree} is not the completion {parent_entry.completion}")
    if q[-1] not in Q.new_labels(up):
        problems.append(f"label {format_node(q[-1])} is not a legal new label below {format_l2(up)}")
    return problems


@dataclass(frozen=True)
class PartialLevel2:
    """A partial level <=2 tree (Q, (d, q, P))."""

    base: Level2Tree
    delta: Delta

    def validate(self) -> list[str]:
        return delta_problems(self.base, self.delta)

    def node_choices(self) -> list:
        if self.delta.degree != 2:
            raise TreeValidationError(f"only degree-2 deltas choose a node component, got {self.delta}")
        return self.base.node_choices(self.delta.q)

    def completions(self) -> list[Level2Tree]:
        """All completions, in <_BK order of the new node component with -1 last.

        Raises:
            TreeValidationError: For a degree-0 delta, which has no extension
        """
        d = self.delta
        if d.degree == 0:
            raise TreeValidationError("a degree-0 partial tree has no completion")
        if d.degree == 1:
            return [self.base.with_t1(d.q)]
        return [self.base.with_entry(d.q, Entry(d.tree, p)) for p in self.node_choices()]

    def completion_with(self, node: Any) -> Level2Tree:
        if self.delta.degree == 1:
            return self.base.with_t1(self.delta.q)
        if node not in self.node_choices():
            raise TreeValidationError(f"{format_node(node)} is not a node component for {self.delta}")
        return self.base.with_entry(self.delta.q, Entry(self.delta.tree, node))

    @cached_property
    def ucf(self) -> Designator:
        """(0, -1), (1, q*) or (2, q*) with q* a discontinuous or extended description."""
        Q, d = self.base, self.delta
        if d.degree == 0:
            return ZERO_UCF
        if d.degree == 1:
            up = d.q[:-1]
            return (2, CONSTANT) if up == ROOT else (1, up)
        up, a = d.q[:-1], d.q[-1]
        if len(a) > 1:
            return (2, discontinuous_desc(Q, up + (a[:-1],)))
        return (2, extended_desc(Q, up))

    @cached_property
    def ucf_star(self) -> Optional[QWDesc]:
        """ucf collapsed into desc(Q, P); None stands for (0, -1, {})."""
        e, x = self.ucf
        if e == 0:
            return None
        if e == 1:
            return QWDesc(1, x)
        if x.kind == DescKind.EXTENDED:
            x = discontinuous_desc(self.base, x.q)
        return QWDesc(2, x, {p: p for p in x.tree.nodes})

    @cached_property
    def cf(self) -> int:
        if self.delta.degree == 0:
            return 0
        least = enum_desc_qw(self.base, self.delta.tree, descending=False)[0]
        return 1 if self.ucf_star.corner == least.corner else 2

    @property
    def ucf_minus(self) -> QWDesc:
        """The immediate predecessor of ucf* in desc(Q, P).

        Raises:
            DescriptionError: Unless cf = 2
        """
        if self.cf != 2:
            raise DescriptionError(f"ucf- needs cofinality 2, {self.delta} has {self.cf}")
        Q, d = self.base, self.delta
        if d.degree == 1:
            below = Q.t1.with_node(d.q).pred(d.q)
            if below is None:
                raise DescriptionError(f"{format_node(d.q)} is <_BK-least and has no predecessor")
            return QWDesc(1, below)
        siblings = Q.lower_siblings(d.q)
        up = d.q[:-1]
        if siblings:
            x = discontinuous_desc(Q, up + (max(siblings, key=bk_key),))
        else:
            x = continuous_desc(Q, up)
        return QWDesc(2, x, {p: p for p in x.tree.nodes})

    def __str__(self) -> str:
        return f"({self.base}, {self.delta})"


def delta_for_ucf(Q: Level2Tree, ucf: Designator) -> Optional[Delta]:
    """The unique new node of Q whose partial tree has uniform cofinality ``ucf``.

    Returns None when no new node of Q is approached that way (continuous
    descriptions, or extensions of degree-0 nodes).
    """
    e, x = ucf
    if e == 0:
        return ZERO_DELTA
    if e == 1:
        return Delta(1, x + (len(Q.t1.children(x)),))
    if x.kind == DescKind.CONTINUOUS:
        return None
    if x.kind == DescKind.EXTENDED:
        up = x.q
        label = (len(Q.label_tree(up).children(ROOT)),)
    elif not x.q:
        return Delta(1, (len(Q.t1.children(ROOT)),))
    else:
        up, a = x.q[:-1], x.q[-1]
        label = a + (len(Q.label_tree(up).children(a)),)
    entry = Q.entry(up)
    if entry.node == MINUS_ONE:
        return None
    return Delta(2, up + (label,), entry.completion)


@dataclass(frozen=True)
class Level2Tower:
    """A potential partial level <=2 tower (Q, (d_i, q_i, P_i)_{1 <= i <= k}).

    Discontinuous towers keep the last delta pending, so Q holds the nodes of
    the first k - 1 deltas. Continuous towers end at a completion that already
    holds the node of the last delta.
    """

    tree: Level2Tree
    deltas: tuple = ()
    continuous: bool = False

    @property
    def length(self) -> int:
        return len(self.deltas)

    @property
    def last(self) -> PartialLevel2:
        if self.continuous:
            raise TreeValidationError("a continuous tower has no pending delta")
        return PartialLevel2(self.tree, self.deltas[-1])

    @property
    def signature(self) -> tuple:
        """((d_i, q_i))_{i < k}: the nodes added along the tower."""
        top = self.length if self.continuous else self.length - 1
        return tuple(delta.dnode for delta in self.deltas[:top])

    @cached_property
    def ucf(self) -> Designator:
        if not self.continuous:
            return self.last.ucf
        last = self.deltas[-1]
        if last.degree == 1:
            return (1, last.q)
        return (2, discontinuous_desc(self.tree, last.q))

    def prefix(self, i: int) -> "Level2Tower":
        """(Q_i, deltas 1..i) as a discontinuous tower."""
        kept = [delta.dnode for delta in self.deltas[: i - 1]]
        t1 = [q for d, q in kept if d == 1]
        dom = [q for d, q in kept if d == 2]
        return Level2Tower(self.tree.restricted(t1, dom), self.deltas[:i])

    def is_valid(self) -> bool:
        """Every delta is a legal new node of the tree built so far; only the last may be of degree 0."""
        built = Level2Tree()
        for i, delta in enumerate(self.deltas):
            if delta_problems(built, delta):
                return False
            if delta.degree == 0:
                return i == self.length - 1 and not self.continuous and built == self.tree
            if i < self.length - 1 or self.continuous:
                node = self.tree.node_at(delta.q) if delta.degree == 2 else None
                built = PartialLevel2(built, delta).completion_with(node)
        return built == self.tree

    def __str__(self) -> str:
        return f"({self.tree}, ({', '.join(str(delta) for delta in self.deltas)}))"
