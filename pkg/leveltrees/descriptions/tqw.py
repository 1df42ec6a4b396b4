"""(T,Q,*)-descriptions and the level <=2 tensor product T (x) Q.

A (T,Q,-1)-description is a (T, 1Q)-description and is kept here as a QWDesc
over T and 1Q. A degree-2 description is (2, t, tau) with t a non-constant
description of 2T and tau an (S, Q, W)-factoring; its witness tower (W, w) is
determined by the contraction of the signatures of tau and by the cofinality
clause, so it is derived rather than stored.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Any, Callable, Iterable, Mapping, Optional

from leveltrees.descriptions.qdesc import (
    CONSTANT,
    LEAST_CONTINUOUS,
    DescKind,
    DescriptionError,
    QDesc,
    desc_q,
    discontinuous_desc,
    map_desc,
    star_cofinality,
    ucf_q,
)
from leveltrees.descriptions.qw import (
    FactorSQW,
    QWDesc,
    contraction,
    enum_desc_qw,
    factor_check_sqw,
    id_star,
    immediate_predecessor,
    immediate_successor,
    render_alpha,
    render_qw,
    tensor_map,
)
from leveltrees.ordinals.bk import bk_key
from leveltrees.trees.level1 import (
    MINUS_ONE,
    ROOT,
    ROOT_TOWER,
    Level1Tower,
    Level1Tree,
    Node,
    format_node,
    parent,
)
from leveltrees.trees.level2 import L2_ROOT, Entry, L2Node, Level2Factoring, Level2Tree, format_l2

logger = logging.getLogger(__name__)

# A node of a level <=2 tree as a pair (d, x): x is in 1X for d = 1, in dom(2X) for d = 2.
DNode = tuple[int, tuple]


@lru_cache(maxsize=512)
def _desc_qw_ascending(Q: Level2Tree, W: Level1Tree) -> tuple[QWDesc, ...]:
    return tuple(enum_desc_qw(Q, W, descending=False))


@dataclass(frozen=True)
class TQWDesc:
    """A (T,Q,*)-description (d, t, tau).

    For d = 1, ``t`` is a QWDesc over (T, 1Q) and ``tau`` is None. For d = 2,
    ``t`` is a QDesc of 2T and ``tau`` maps its tree S into desc(Q, *).
    """

    degree: int
    t: Any
    tau: Optional[FactorSQW] = None

    def __post_init__(self) -> None:
        if self.degree == 1:
            if not isinstance(self.t, QWDesc) or self.tau is not None:
                raise DescriptionError(f"degree-1 description needs a (T, 1Q)-description, got {self.t}")
        elif self.degree == 2:
            if not isinstance(self.t, QDesc) or self.t.kind == DescKind.EXTENDED:
                raise DescriptionError(f"{self.t} is not a description of 2T")
            if self.tau is None or set(self.tau.table) != set(self.t.tree.nodes) | {ROOT}:
                raise DescriptionError(f"map domain does not match {self.t.tree}")
        else:
            raise DescriptionError(f"degree must be 1 or 2, got {self.degree}")

    @property
    def is_constant(self) -> bool:
        return self.degree == 2 and self.t.is_constant

    @property
    def length(self) -> int:
        if self.degree != 2:
            raise DescriptionError("degree-1 descriptions have no length")
        return self.t.length

    def _values(self) -> list[QWDesc]:
        """(tau(s_i))_{i < k}."""
        return [self.tau(self.t.nodes[i]) for i in range(self.t.length)]

    @cached_property
    def corner(self) -> tuple:
        if self.degree == 1:
            return (1, self.t.corner)
        body: list = []
        for i, d in enumerate(self._values()):
            body += [d, self.t.q[i]]
        return (2, tuple(body))

    def sort_key(self) -> tuple:
        return bk_key(self.corner)

    @cached_property
    def contracted_nodes(self) -> tuple:
        """The contraction of (sign(tau(s_i)))_{i < k}."""
        if self.degree == 1:
            return ()
        return contraction([d.sign for d in self._values()])[0]

    @cached_property
    def tower(self) -> Level1Tower:
        """The unique (W, w) with this description in desc(T, Q, (W, w)).

        Raises:
            DescriptionError: For degree-1 descriptions, or when the cofinality
                clause points outside W
        """
        if self.degree != 2:
            raise DescriptionError("degree-1 descriptions have no tower")
        if self.is_constant:
            return ROOT_TOWER
        W = Level1Tree.of(*self.contracted_nodes)
        s_star = ucf_q(self.t)
        u = MINUS_ONE if s_star == MINUS_ONE else self.tau(s_star).ucf
        if u == MINUS_ONE:
            return Level1Tower(self.contracted_nodes + (MINUS_ONE,))
        if not W.contains_or_root(u):
            raise DescriptionError(f"cofinality {format_node(u)} of {self} lies outside {W}")
        return Level1Tower(self.contracted_nodes + (u + (len(W.children(u)),),))

    @property
    def W(self) -> Level1Tree:
        return self.tower.tree

    @property
    def sign(self) -> tuple:
        if self.degree == 1:
            return tuple((1, q) for q in self.t.sign)
        return contraction([d.sign_star for d in self._values()])[0]

    @property
    def is_continuous(self) -> bool:
        if self.degree == 1 or not self.t.is_continuous:
            return False
        return self.tau(self.t.nodes[self.t.length - 1]).is_star_continuous(self.W)

    @property
    def ucf(self) -> tuple[int, Any]:
        """(0, -1), (1, q) or a member of desc*(Q)."""
        if self.degree == 1:
            q = self.t.ucf
            return (0, MINUS_ONE) if q == MINUS_ONE else (1, q)
        s_star = ucf_q(self.t)
        if s_star == MINUS_ONE:
            return (0, MINUS_ONE)
        return self.tau(s_star).ucf_star(self.W)

    @property
    def is_plus_discontinuous(self) -> bool:
        return self.degree == 2 and self.tower.pending != MINUS_ONE

    @property
    def ucf_plus(self) -> tuple[int, Any]:
        if not self.is_plus_discontinuous:
            raise DescriptionError(f"{self} is not of plus-discontinuous type")
        return self.tau(ucf_q(self.t)).ucf_star(self.tower.completion)

    @property
    def sign_star(self) -> tuple:
        if self.degree == 1:
            return ((1, self.t),)
        x = self.t
        top = x.length - 1 if x.is_continuous else x.length
        return tuple((2, x.q[:i]) for i in range(1, top + 1))

    def is_star_continuous(self, Q: Level2Tree) -> bool:
        """*-Q-continuity: the <-predecessor of tau(ucf(S, s)) in desc(Q, W) is hit by tau."""
        if self.degree == 1:
            return self.t.is_star_continuous(Q.t1)
        s_star = ucf_q(self.t)
        if s_star == MINUS_ONE:
            return True
        D = self.tau(s_star)
        pool = _desc_qw_ascending(Q, self.W)
        if D.corner == pool[0].corner:
            return True
        below = immediate_predecessor(D, pool)
        return below is not None and any(below.corner == d.corner for d in self.tau.range)

    def ucf_star(self, Q: Level2Tree) -> tuple[int, Any]:
        """The *-Q-uniform cofinality, a member of desc*(T)."""
        if self.degree == 1:
            return self.t.ucf_star(Q.t1)
        return star_cofinality(self.t, self.is_star_continuous(Q))

    def restrict(self, l: int) -> "TQWDesc":
        """C|l = (2, t|l, tau restricted to {s_i : i < l})."""
        x = self.t.restrict(l)
        return TQWDesc(2, x, self.tau.restrict(x.tree))

    @property
    def minus(self) -> "TQWDesc":
        return self.restrict(self.length - 1)

    def is_initial_segment_of(self, other: "TQWDesc") -> bool:
        if self.degree != 2 or other.degree != 2:
            return False
        return any(other.restrict(l).corner == self.corner for l in range(other.length))

    def restrict_tower(self, W: Level1Tree, Q: Level2Tree) -> "TQWDesc":
        """C | (T, Q, W) for W = W_m' with m' < m.

        Let l be least with tau(s_l) outside desc(Q, W) and D its restriction to
        (Q, W). If D is tau(s_l^-) the result is C|l; otherwise it is the
        continuous description t|l^(-1) with s_l sent to D.
        """
        if self.degree != 2 or self.is_constant:
            raise DescriptionError(f"{self} has no restriction to a smaller tower")
        targets = _desc_qw_ascending(Q, W)
        x = self.t
        for l in range(x.length):
            s = x.nodes[l]
            value = self.tau(s)
            if all(w in W for _, w in value.sigma):
                continue
            D = immediate_successor(value, targets)
            if D.corner == self.tau(parent(s)).corner:
                return self.restrict(l)
            cont = QDesc(x.q[:l] + (MINUS_ONE,), Level1Tree.of(*x.nodes[: l + 1]), x.nodes[: l + 1], DescKind.CONTINUOUS)
            table = {x.nodes[i]: self.tau(x.nodes[i]) for i in range(l)}
            table[s] = D
            return TQWDesc(2, cont, FactorSQW(cont.tree, table))
        raise DescriptionError(f"{self} already lies in desc(T, Q, {W})")

    def __str__(self) -> str:
        return render_tqw(self)


CONSTANT_TQW = TQWDesc(2, CONSTANT, FactorSQW(Level1Tree()))


def degree1_descriptions(T: Level2Tree, Q: Level2Tree) -> list[TQWDesc]:
    """Non-constant (T, Q, -1)-descriptions, <-ascending."""
    return [TQWDesc(1, d) for d in enum_desc_qw(T, Q.t1, descending=False) if not d.is_constant]


def _clause4(C: TQWDesc) -> bool:
    """A continuous t whose last contracted node is new at s_{k-1} needs a discontinuous tau(s_{k-1})."""
    x = C.t
    if not x.is_continuous:
        return True
    k = x.length
    last = C.tau(x.nodes[k - 1])
    if not last.is_continuous:
        return True
    earlier = [C.tau(x.nodes[i]).sign for i in range(k - 1)] + [last.minus.sign]
    return C.contracted_nodes[-1] in contraction(earlier)[0]


def absorb_signature(prefix: tuple, seen: int, sign: tuple) -> Optional[int]:
    """Feed one signature into a running contraction that must stay a prefix of ``prefix``."""
    for a in sign:
        if a in prefix[:seen]:
            continue
        if seen < len(prefix) and a == prefix[seen]:
            seen += 1
            continue
        return None
    return seen


def _contracting_maps(x: QDesc, pool: list[QWDesc], prefix: tuple) -> Iterable[dict]:
    """Maps s_i -> pool, in branch order, whose signatures contract to exactly ``prefix``."""
    order = [x.nodes[i] for i in range(x.length)]

    def extend(i: int, chosen: list, seen: int) -> Iterable[dict]:
        if i == len(order):
            if seen == len(prefix):
                yield dict(zip(order, chosen))
            return
        for d in pool:
            after = absorb_signature(prefix, seen, d.sign)
            if after is not None:
                yield from extend(i + 1, chosen + [d], after)

    yield from extend(0, [], 0)


def _increasing(x: QDesc, table: dict) -> bool:
    keys = [table[s].sort_key() for s in x.tree.ordered]
    return all(a < b for a, b in zip(keys, keys[1:]))


def _candidates(T: Level2Tree, Q: Level2Tree, prefix: tuple) -> Iterable[TQWDesc]:
    """Degree-2 descriptions over W = set(prefix) whose contraction is exactly ``prefix``."""
    W = Level1Tree.of(*prefix)
    pool = [d for d in _desc_qw_ascending(Q, W) if not d.is_constant]
    for x in desc_q(T):
        if x.is_constant:
            continue
        for table in _contracting_maps(x, pool, prefix):
            if not _increasing(x, table):
                continue
            C = TQWDesc(2, x, FactorSQW(x.tree, table))
            if not _clause4(C):
                continue
            try:
                C.tower
            except DescriptionError:
                continue
            yield C


def enum_desc_tqw(T: Level2Tree, Q: Level2Tree, tower: Level1Tower, descending: bool = True) -> list[TQWDesc]:
    """desc(T, Q, (W, w)), sorted by corners."""
    if tower.length == 0:
        return [CONSTANT_TQW]
    out = [C for C in _candidates(T, Q, tower.nodes[:-1]) if C.tower.pending == tower.pending]
    out.sort(key=TQWDesc.sort_key, reverse=descending)
    logger.debug(f"Enumerated {len(out)} (T,Q,W)-descriptions over {tower}")
    return out


def check_tqw(C: TQWDesc, T: Level2Tree, Q: Level2Tree, tower: Optional[Level1Tower] = None) -> bool:
    """Clause check of C against desc(T, Q, -1) (tower None) or desc(T, Q, tower)."""
    if tower is None:
        if C.degree != 1:
            return False
        return any(C.corner == D.corner for D in degree1_descriptions(T, Q))
    if C.degree != 2 or not tower.is_valid():
        return False
    if tower.length == 0:
        return C.corner == CONSTANT_TQW.corner
    if C.is_constant or C.t not in desc_q(T):
        return False
    if not factor_check_sqw(C.tau, Q, tower.tree):
        return False
    if C.contracted_nodes != tower.nodes[:-1] or not _clause4(C):
        return False
    try:
        return C.tower == tower
    except DescriptionError:
        return False


@dataclass(frozen=True)
class TQTensor:
    """A representation (X, pi) of T (x) Q."""

    tree: Level2Tree
    pi: tuple

    @cached_property
    def table(self) -> dict[DNode, TQWDesc]:
        return dict(self.pi)

    def __call__(self, d: int, x: tuple) -> TQWDesc:
        try:
            return self.table[(d, tuple(x))]
        except KeyError:
            raise DescriptionError(f"({d}, {x}) is not a node of the tensor product") from None

    def node_of(self, C: TQWDesc) -> DNode:
        for dx, D in self.pi:
            if D.corner == C.corner:
                return dx
        raise DescriptionError(f"{C} is not a node of the tensor product")

    def listing(self, descending: bool = True) -> list[tuple[DNode, TQWDesc]]:
        return sorted(self.pi, key=lambda item: item[1].sort_key(), reverse=descending)


def tensor_tq(T: Level2Tree, Q: Level2Tree, max_length: Optional[int] = None) -> TQTensor:
    """Build X and pi level by level: the children of x are the descriptions over
    the completion of its tower that restrict to pi(2, x), labelled <-ascending."""
    ones = degree1_descriptions(T, Q)
    pi: dict[DNode, TQWDesc] = {(1, (i,)): C for i, C in enumerate(ones)}
    entries: dict[L2Node, Entry] = {}
    frontier = [(L2_ROOT, CONSTANT_TQW)]
    pi[(2, L2_ROOT)] = CONSTANT_TQW
    while frontier:
        x, C = frontier.pop(0)
        tower = C.tower
        entries[x] = Entry(tower.tree, tower.pending)
        if tower.pending == MINUS_ONE or (max_length is not None and len(x) >= max_length):
            continue
        W = tower.tree
        kids = [D for D in _candidates(T, Q, tower.nodes) if restricts_to(D, C, W, Q)]
        kids.sort(key=TQWDesc.sort_key)
        for a, D in enumerate(kids):
            child = x + ((a,),)
            pi[(2, child)] = D
            frontier.append((child, D))
    X = Level2Tree(Level1Tree.of(*[(i,) for i in range(len(ones))]), tuple(entries.items()))
    logger.debug(f"T (x) Q has {len(X.t1)} degree-1 and {len(X.dom)} degree-2 nodes")
    return TQTensor(X, tuple(sorted(pi.items(), key=lambda kv: bk_key(kv[0]))))


def restricts_to(D: TQWDesc, C: TQWDesc, W: Level1Tree, Q: Level2Tree) -> bool:
    try:
        return D.restrict_tower(W, Q).corner == C.corner
    except DescriptionError:
        return False


def factor_check_xtq(pi: Mapping[DNode, TQWDesc], X: Level2Tree, T: Level2Tree, Q: Level2Tree) -> bool:
    """pi factors (X, T, Q)."""
    dom = [(1, x) for x in X.t1] + [(2, x) for x in X.dom]
    if set(pi) != set(dom):
        logger.debug("Map domain differs from dom(X)")
        return False
    if pi[(2, L2_ROOT)].corner != CONSTANT_TQW.corner:
        return False
    for x in X.t1:
        C = pi[(1, x)]
        if not (check_tqw(C, T, Q) or C.corner == CONSTANT_TQW.corner):
            logger.debug(f"pi(1, {format_node(x)}) is not a (T,Q,-1)-description")
            return False
    for x in X.dom:
        if not check_tqw(pi[(2, x)], T, Q, Level1Tower(X.node_sequence(x))):
            logger.debug(f"pi(2, {format_l2(x)}) is not a description over its tower")
            return False
    ordered = sorted(dom, key=bk_key)
    for a, b in zip(ordered, ordered[1:]):
        if not pi[a].sort_key() < pi[b].sort_key():
            logger.debug(f"pi is not increasing at {a}, {b}")
            return False
    for x in X.dom:
        if not x:
            continue
        up = pi[(2, x[:-1])]
        try:
            restricted = pi[(2, x)].restrict_tower(X.tree_at(x[:-1]), Q)
        except DescriptionError:
            return False
        if restricted.corner != up.corner:
            logger.debug(f"pi(2, {format_l2(x)}) does not restrict to its parent's value")
            return False
    return True


def id_tstar(T: Level2Tree) -> dict[DNode, TQWDesc]:
    """id_{T,*}, factoring (T, T, Q^0)."""
    out: dict[DNode, TQWDesc] = {(1, t): TQWDesc(1, QWDesc(1, t)) for t in T.t1}
    for t in T.dom:
        x = discontinuous_desc(T, t)
        out[(2, t)] = TQWDesc(2, x, id_star(x.tree))
    return out


def id_start(T: Level2Tree) -> dict[DNode, TQWDesc]:
    """id_{*,T}, factoring (T, Q^0, T).

    A degree-1 node t goes to the (Q^0, 1T)-description (2, q_0, (0) -> t); a
    degree-2 node t goes to (2, q_0, (0) -> (2, 2T[t], id_S)).
    """
    out: dict[DNode, TQWDesc] = {(1, t): TQWDesc(1, QWDesc(2, LEAST_CONTINUOUS, {(0,): t})) for t in T.t1}
    for t in T.dom:
        if not t:
            out[(2, t)] = CONSTANT_TQW
            continue
        x = discontinuous_desc(T, t)
        value = QWDesc(2, x, {p: p for p in x.tree.nodes})
        out[(2, t)] = TQWDesc(2, LEAST_CONTINUOUS, FactorSQW(Level1Tree.of((0,)), {(0,): value}))
    return out


def tensor_map_left(pi2: Mapping, C: TQWDesc, pi1: Optional[Mapping] = None) -> TQWDesc:
    """(pi (x) Q)(d, x, tau) = (d, pi(x), tau) for a level <=2 factoring pi of (X, T)."""
    if C.degree == 1:
        return TQWDesc(1, tensor_map(pi2, C.t, pi1))
    return TQWDesc(2, map_desc(dict(pi2), C.t), C.tau)


def tensor_map_right(psi: Level2Factoring, C: TQWDesc) -> TQWDesc:
    """(T (x) psi)(d, t, tau) for a level <=2 factoring psi of (Q, U): the Q-side values move along psi."""
    one, two = psi.map1, psi.map2
    if C.degree == 1:
        t = C.t
        if t.degree == 1:
            return C
        return TQWDesc(1, QWDesc(2, t.q, {p: one[w] for p, w in t.sigma}))
    if C.is_constant:
        return C
    table = {s: tensor_map(two, d, one) for s, d in C.tau.values}
    return TQWDesc(2, C.t, FactorSQW(C.t.tree, table))


def render_tqw(C: TQWDesc, alpha: Callable[[Node], str] = render_alpha) -> str:
    """Listing text: (2, (g(2, (a_(0), (0))), (1))) for degree 2, the (T, 1Q) text for degree 1.

    ``alpha`` renders the 1Q nodes a degree-1 description maps into.
    """
    if C.degree == 1:
        return render_qw(C.t, alpha)
    parts = []
    for i, d in enumerate(C._values()):
        parts += ["g" + render_qw(d), format_node(C.t.q[i])]
    if not parts:
        return "(2, ())"
    return "(2, (" + ", ".join(parts) + "))"



def render_nested(C: TQWDesc) -> str:
    """<<C>>: the corner for degree 1, (2, <tau> (+) t) with every tau value shown by its corner for degree 2."""
    if C.degree == 1:
        return render_qw(C.t, format_node)
    parts = []
    for i, d in enumerate(C._values()):
        parts += [render_qw(d, format_node), format_node(C.t.q[i])]
    if not parts:
        return "(2, ())"
    return "(2, (" + ", ".join(parts) + "))"


def restrict_q(C: TQWDesc, T: Level2Tree, Q: Level2Tree, tower: Optional[Level1Tower] = None) -> TQWDesc:
    """C | (T, Q) for a subtree Q of the tree C was built over.

    Degree-2 descriptions move to their immediate successor in desc(T, Q, tower);
    degree-1 ones to theirs among the (T, 1Q)-descriptions.
    """
    if C.degree == 1:
        return TQWDesc(1, immediate_successor(C.t, enum_desc_qw(T, Q.t1)))
    if tower is None:
        tower = C.tower
    return immediate_successor(C, enum_desc_tqw(T, Q, tower))
