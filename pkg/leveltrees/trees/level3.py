"""Level-3 trees.

A level-3 tree R assigns to every node r (a nonempty sequence of labels,
each label a level-1 node) a partial level <=2 tree (Q_r, (d_r, q_r, P_r)).
Length-1 nodes sit over Q^0, and the tree of a child r^(a) is a completion of
the partial tree at r. R[r] is the tower (Q_r, (delta_{r|1}, ..., delta_r)).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Mapping

from leveltrees.models import Violation
from leveltrees.ordinals.bk import bk_key
from leveltrees.trees.level1 import Level1Tree, TreeValidationError, validate_level1
from leveltrees.trees.level2 import L2_ROOT, L2Node, Level2Tree, Q0, format_l2, validate_level2
from leveltrees.trees.towers import Delta, Level2Tower, PartialLevel2, delta_problems

logger = logging.getLogger(__name__)

# A level-3 node is a nonempty sequence of labels; () is the root.
L3Node = L2Node
L3_ROOT: L3Node = L2_ROOT


@dataclass(frozen=True)
class Level3Entry:
    """R(r) = (Q_r, delta_r)."""

    tree: Level2Tree
    delta: Delta

    @property
    def degree(self) -> int:
        return self.delta.degree

    @property
    def partial(self) -> PartialLevel2:
        return PartialLevel2(self.tree, self.delta)

    def sort_key(self) -> tuple:
        return (self.tree.sort_key(), self.delta.sort_key())

    def __str__(self) -> str:
        return f"({self.tree}, {self.delta})"


@dataclass(frozen=True)
class Level3Tree:
    """A finite level-3 tree; ``entries`` is kept <_BK ascending by node."""

    entries: tuple = ()

    def __post_init__(self) -> None:
        items = self.entries.items() if isinstance(self.entries, Mapping) else self.entries
        normalized = tuple(sorted(((tuple(tuple(a) for a in r), e) for r, e in items), key=lambda kv: bk_key(kv[0])))
        object.__setattr__(self, "entries", normalized)

    @classmethod
    def build(cls, table: Mapping) -> "Level3Tree":
        """Build from r -> (Q_r, delta_r) pairs."""
        return cls(tuple((r, Level3Entry(Q, delta)) for r, (Q, delta) in table.items()))

    @cached_property
    def table(self) -> dict[L3Node, Level3Entry]:
        return dict(self.entries)

    @cached_property
    def dom(self) -> tuple[L3Node, ...]:
        return tuple(r for r, _ in self.entries)

    def __contains__(self, r: object) -> bool:
        return r in self.table

    def __iter__(self) -> Iterator[L3Node]:
        return iter(self.dom)

    def __len__(self) -> int:
        return len(self.dom)

    def entry(self, r: L3Node) -> Level3Entry:
        try:
            return self.table[r]
        except KeyError:
            raise TreeValidationError(f"{format_l2(r)} is not in the domain of R") from None

    def tree_at(self, r: L3Node) -> Level2Tree:
        """R_tree(r)."""
        return self.entry(r).tree

    def delta_at(self, r: L3Node) -> Delta:
        """R_node(r)."""
        return self.entry(r).delta

    def partial_at(self, r: L3Node) -> PartialLevel2:
        return self.entry(r).partial

    def children(self, r: L3Node) -> list:
        return sorted((x[-1] for x in self.dom if len(x) == len(r) + 1 and x[: len(r)] == r), key=bk_key)

    def label_tree(self, r: L3Node) -> Level1Tree:
        return Level1Tree(frozenset(self.children(r)))

    def tower_at(self, r: L3Node) -> Level2Tower:
        """R[r] as a discontinuous tower."""
        deltas = tuple(self.delta_at(r[:i]) for i in range(1, len(r) + 1))
        return Level2Tower(self.tree_at(r), deltas)

    def restricted(self, keep: Iterable[L3Node]) -> "Level3Tree":
        """The subtree on ``keep``, dropping nodes whose prefixes are not all kept."""
        keep = set(keep)
        closed = [r for r in self.dom if all(r[:i] in keep for i in range(1, len(r) + 1))]
        return Level3Tree(tuple((r, self.table[r]) for r in closed))

    def below(self, t: L3Node) -> "Level3Tree":
        """R | t: the nodes r with r <_0 t, that is r(0) <_BK t(0)."""
        return self.restricted(r for r in self.dom if bk_key(r[0]) < bk_key(t[0]))

    def sort_key(self) -> tuple:
        return tuple((bk_key(r), e.sort_key()) for r, e in self.entries)

    def __str__(self) -> str:
        body = "; ".join(f"{format_l2(r)}: {e}" for r, e in reversed(self.entries))
        return f"R({body})"


EMPTY_L3 = Level3Tree()


def validate_level3(R: Level3Tree, regular: bool = True) -> list[Violation]:
    """Check closure, the Q^0 base of length-1 nodes, legal deltas, branch coherence and labels."""
    violations: list[Violation] = []
    for r, e in R.entries:
        name = f"3:{format_l2(r)}"
        if not r:
            violations.append(Violation(node=name, rule="nonempty", message="the root is not a node"))
            continue
        for v in validate_level2(e.tree, regular):
            violations.append(Violation(node=name, rule=f"tree {v.rule}", message=f"{v.node}: {v.message}"))
        for problem in delta_problems(e.tree, e.delta):
            violations.append(Violation(node=name, rule="delta", message=problem))
        if len(r) == 1:
            if e.tree != Q0:
                violations.append(Violation(node=name, rule="base", message="length-1 nodes sit over Q^0"))
            continue
        up = r[:-1]
        if up not in R:
            violations.append(Violation(node=name, rule="closed", message=f"parent {format_l2(up)} missing"))
            continue
        parent_entry = R.entry(up)
        if parent_entry.degree == 0:
            violations.append(Violation(node=name, rule="coherence", message=f"parent {format_l2(up)} has degree 0"))
            continue
        if e.tree not in parent_entry.partial.completions():
            violations.append(
                Violation(
                    node=name,
                    rule="coherence",
                    message=f"tree is not a completion of the partial tree at {format_l2(up)}",
                )
            )
    for r in (L3_ROOT, *R.dom):
        for v in validate_level1(R.label_tree(r), regular):
            violations.append(Violation(node=f"3:{format_l2(r)}", rule=f"labels {v.rule}", message=v.message))
    if violations:
        logger.debug(f"Level-3 tree has {len(violations)} violations")
    return violations


@dataclass(frozen=True)
class Level3Factoring:
    """A map rho from dom(S) into dom(R)."""

    source: Level3Tree
    target: Level3Tree
    values: tuple = ()

    def __post_init__(self) -> None:
        items = self.values.items() if isinstance(self.values, Mapping) else self.values
        frozen = {tuple(tuple(a) for a in s): tuple(tuple(a) for a in r) for s, r in items}
        object.__setattr__(self, "values", tuple(sorted(frozen.items(), key=lambda kv: bk_key(kv[0]))))

    @classmethod
    def identity(cls, R: Level3Tree) -> "Level3Factoring":
        return cls(R, R, {r: r for r in R.dom})

    @cached_property
    def table(self) -> dict[L3Node, L3Node]:
        return dict(self.values)

    def __call__(self, s: L3Node) -> L3Node:
        try:
            return self.table[tuple(s)]
        except KeyError:
            raise TreeValidationError(f"{format_l2(s)} is not in the domain of the factoring") from None

    @property
    def range(self) -> set:
        return set(self.table.values())


def factor_check_l3(rho: Level3Factoring) -> bool:
    """rho factors (S, R): entries and prefixes are kept, and siblings with equal
    trees keep their <_BK order."""
    S, R = rho.source, rho.target
    if set(rho.table) != set(S.dom):
        return False
    for s, r in rho.table.items():
        if r not in R or len(r) != len(s) or R.entry(r) != S.entry(s):
            return False
        if len(s) > 1 and rho.table[s[:-1]] != r[:-1]:
            return False
    for s in (L3_ROOT, *S.dom):
        kids = [s + (a,) for a in S.children(s)]
        for i, a in enumerate(kids):
            for b in kids[i + 1 :]:
                if S.tree_at(a) == S.tree_at(b) and not bk_key(rho.table[a][-1]) < bk_key(rho.table[b][-1]):
                    return False
    return True


def upward_closure(nodes: Iterable[L3Node]) -> set:
    return {r[:i] for r in nodes for i in range(1, len(r) + 1)}


def shift_check(R: Level3Tree, s: tuple, s_prime: tuple) -> bool:
    """s' is an R-shift of s.

    Factorings of a common S onto the two upward closures compose to a map that
    sends s_i|j to s'_i|j, so that map is the only candidate to check.
    """
    if len(s) != len(s_prime) or any(len(a) != len(b) for a, b in zip(s, s_prime)):
        return False
    if not all(x in R for x in (*s, *s_prime)):
        raise TreeValidationError("shift_check needs nodes of R")
    phi: dict[L3Node, L3Node] = {}
    for a, b in zip(s, s_prime):
        for j in range(1, len(a) + 1):
            if phi.setdefault(a[:j], b[:j]) != b[:j]:
                return False
    if len(set(phi.values())) != len(phi):
        return False
    if set(phi.values()) != upward_closure(s_prime):
        return False
    if any(R.entry(x) != R.entry(y) for x, y in phi.items()):
        return False
    siblings: dict = {}
    for x in phi:
        siblings.setdefault(x[:-1], []).append(x)
    for group in siblings.values():
        for i, a in enumerate(group):
            for b in group[i + 1 :]:
                if R.tree_at(a) != R.tree_at(b):
                    continue
                if (bk_key(a[-1]) < bk_key(b[-1])) != (bk_key(phi[a][-1]) < bk_key(phi[b][-1])):
                    return False
    return True
