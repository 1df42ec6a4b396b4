"""Level-1 trees: finite sets of nonempty sequences of naturals, ordered by <_BK."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Union

from leveltrees.models import Violation
from leveltrees.ordinals.bk import bk_key

logger = logging.getLogger(__name__)

Node = tuple[int, ...]
# -1 stands for "no node" in node components and descriptions.
MINUS_ONE = -1
NodeOrMinus = Union[Node, int]
ROOT: Node = ()


class TreeValidationError(ValueError):
    """Raised when a tree, partial tree or completion request is invalid."""
    pass


def parent(x: Node) -> Node:
    return x[:-1]


def node_key(x: NodeOrMinus) -> tuple:
    """<_BK key for level-1 nodes with -1 below every node and the root above every node."""
    if x == MINUS_ONE:
        return (0,)
    return (1, bk_key(x))


@dataclass(frozen=True)
class Level1Tree:
    """A finite level-1 tree; iteration and ``ordered`` follow <_BK ascending."""

    nodes: frozenset = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "nodes", frozenset(tuple(x) for x in self.nodes))

    @classmethod
    def of(cls, *nodes: Iterable[int]) -> "Level1Tree":
        return cls(frozenset(tuple(x) for x in nodes))

    @cached_property
    def ordered(self) -> tuple[Node, ...]:
        return tuple(sorted(self.nodes, key=bk_key))

    @cached_property
    def _ranks(self) -> dict[Node, int]:
        return {x: i for i, x in enumerate(self.ordered)}

    def __iter__(self) -> Iterator[Node]:
        return iter(self.ordered)

    def __len__(self) -> int:
        return len(self.nodes)

    def __contains__(self, x: object) -> bool:
        return x in self.nodes

    def sort_key(self) -> tuple:
        return tuple(bk_key(x) for x in self.ordered)

    def rank(self, x: Node) -> int:
        """Position of x in <_BK ascending order, starting at 0."""
        try:
            return self._ranks[x]
        except KeyError:
            raise TreeValidationError(f"{x} is not a node of {self}") from None

    def children(self, x: Node) -> list[int]:
        return sorted(y[-1] for y in self.nodes if len(y) == len(x) + 1 and y[: len(x)] == x)

    def contains_or_root(self, x: Node) -> bool:
        return x == ROOT or x in self.nodes

    def is_new_node(self, p: Node, regular: bool = True) -> bool:
        """p can be added: it is outside the tree, hangs from the tree or the root, and (if regular) takes the next free index."""
        if not isinstance(p, tuple) or not p or p in self.nodes or p[-1] < 0:
            return False
        if not self.contains_or_root(parent(p)):
            return False
        return not regular or p[-1] == len(self.children(parent(p)))

    def new_nodes(self) -> list[Node]:
        """All legal one-node extensions in regular form, <_BK ascending."""
        hooks = [ROOT, *self.nodes]
        return sorted((x + (len(self.children(x)),) for x in hooks), key=bk_key)

    def with_node(self, p: Node) -> "Level1Tree":
        if not self.is_new_node(p):
            raise TreeValidationError(f"{p} is not a legal new node of {self}")
        return Level1Tree(self.nodes | {p})

    def completion(self, p: NodeOrMinus) -> "Level1Tree":
        """The completion of the partial tree (self, p)."""
        if p == MINUS_ONE:
            return self
        return self.with_node(p)

    def pred(self, x: Node) -> Node | None:
        """Immediate <_BK predecessor of x in the tree, None if x is least."""
        i = self.rank(x)
        return self.ordered[i - 1] if i > 0 else None

    def upper_neighbour(self, x: Node) -> Node:
        """Least node of the tree (or the root) that is <_BK above x; x need not be in the tree."""
        above = [y for y in self.nodes if bk_key(y) > bk_key(x)]
        if not above:
            return ROOT
        return min(above, key=bk_key)

    def lower_neighbour(self, x: Node) -> Node | None:
        """Largest node of the tree that is <_BK below x, None if there is none."""
        below = [y for y in self.nodes if bk_key(y) < bk_key(x)]
        if not below:
            return None
        return max(below, key=bk_key)

    def is_subtree_of(self, other: "Level1Tree") -> bool:
        return self.nodes <= other.nodes

    def __str__(self) -> str:
        if not self.nodes:
            return "{}"
        return "{" + ", ".join(format_node(x) for x in reversed(self.ordered)) + "}"


EMPTY = Level1Tree()


def format_node(x: NodeOrMinus) -> str:
    """Listing text of a level-1 node: (0, 1), or -1."""
    if x == MINUS_ONE:
        return "-1"
    return "(" + ", ".join(str(i) for i in x) + ")"


def validate_level1(tree: Level1Tree, regular: bool = True) -> list[Violation]:
    """Check closure under initial segments and, optionally, contiguous child indices."""
    violations: list[Violation] = []
    for x in tree.ordered:
        if not x:
            violations.append(Violation(node="()", rule="nonempty", message="the root is not a node"))
            continue
        if any(i < 0 for i in x):
            violations.append(Violation(node=format_node(x), rule="naturals", message="negative entry"))
        if len(x) > 1 and parent(x) not in tree:
            violations.append(
                Violation(node=format_node(x), rule="closed", message=f"initial segment {format_node(parent(x))} missing")
            )
    if regular:
        for x in [ROOT, *tree.ordered]:
            kids = tree.children(x)
            if kids != list(range(len(kids))):
                violations.append(
                    Violation(
                        node=format_node(x) if x else "()",
                        rule="non-contiguous child",
                        message=f"child indices {kids} are not an initial segment of the naturals",
                    )
                )
    if violations:
        logger.debug(f"Level-1 tree {tree} has {len(violations)} violations")
    return violations


@dataclass(frozen=True)
class Level1Tower:
    """A potential partial level <=1 tower (W, w) of discontinuous type.

    ``nodes`` is (w_0, ..., w_m); W = {w_i : i < m} and the pending node w_m is
    -1 or a new node of W.
    """

    nodes: tuple

    def __post_init__(self) -> None:
        if not self.nodes:
            raise TreeValidationError("a tower needs at least its pending node")
        object.__setattr__(self, "nodes", tuple(w if w == MINUS_ONE else tuple(w) for w in self.nodes))

    @cached_property
    def tree(self) -> Level1Tree:
        return Level1Tree.of(*self.nodes[:-1])

    @property
    def length(self) -> int:
        return len(self.nodes) - 1

    @property
    def pending(self) -> NodeOrMinus:
        return self.nodes[-1]

    @property
    def ucf(self) -> NodeOrMinus:
        return MINUS_ONE if self.pending == MINUS_ONE else parent(self.pending)

    @cached_property
    def completion(self) -> Level1Tree:
        return self.tree.completion(self.pending)

    def extend(self, w: NodeOrMinus) -> "Level1Tower":
        if self.pending == MINUS_ONE:
            raise TreeValidationError(f"tower {self} has no pending node to extend")
        return Level1Tower(self.nodes + (w,))

    def is_valid(self, regular: bool = True) -> bool:
        """Every w_i is a new node of {w_j : j < i}; only the last may be -1."""
        built = EMPTY
        for i, w in enumerate(self.nodes):
            if w == MINUS_ONE:
                return i == self.length
            if not built.is_new_node(w, regular):
                return False
            built = Level1Tree(built.nodes | {w})
        return True

    def __str__(self) -> str:
        return f"({self.tree}, ({', '.join(format_node(w) for w in self.nodes)}))"


ROOT_TOWER = Level1Tower(((0,),))
