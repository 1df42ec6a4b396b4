"""Level-3 descriptions: desc(R), generalized R-descriptions, (Y,T,*)-descriptions and Y (x) T.

An R-description is (r, Q, deltas): r is a node of R with Q = R_tree(r)
(discontinuous type), r^(-1) with Q a completion of R(r) (continuous type),
or r with a completion Q+ of R(r) (extended). A generalized R-description
(r, pi, T) also carries a factoring pi of (Q, T), and its corner interleaves
the labels of r with the order types [[pi(d_i, q_i)]]_T.

A (Y,T,*)-description (y, pi) pairs a non-constant Y-description
y = (y, X, deltas) with an (X,T,Q)-factoring pi. Its values are kept in branch
order, one per node added along the tower of y, and its own tower
(Q, (d_i, q_i, P_i)) is fixed by the contraction of their signatures and the
cofinality clause.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Mapping, Optional

from leveltrees.analysis.otype import node_otype
from leveltrees.descriptions.qdesc import LEAST_CONTINUOUS, DescKind, DescriptionError, QDesc, discontinuous_desc
from leveltrees.descriptions.qw import QWDesc, contraction, immediate_successor
from leveltrees.descriptions.tqw import (
    CONSTANT_TQW,
    DNode,
    FactorSQW,
    TQTensor,
    TQWDesc,
    absorb_signature,
    degree1_descriptions,
    enum_desc_tqw,
    id_start,
    restrict_q,
    tensor_map_right,
    tensor_tq,
)
from leveltrees.ordinals.bk import bk_key
from leveltrees.trees.level1 import MINUS_ONE, Level1Tower, TreeValidationError
from leveltrees.trees.level2 import L2_ROOT, Level2Factoring, Level2Tree, Q0, format_l2
from leveltrees.trees.level3 import L3_ROOT, L3Node, Level3Tree
from leveltrees.trees.towers import ZERO_DELTA, Delta, Designator, Level2Tower, PartialLevel2, delta_for_ucf

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RDesc:
    """An R-description (r, Q, deltas); for continuous ones ``r`` ends in -1."""

    r: tuple
    tree: Level2Tree
    deltas: tuple
    kind: DescKind = DescKind.DISCONTINUOUS

    def __post_init__(self) -> None:
        object.__setattr__(self, "r", tuple(a if a == MINUS_ONE else tuple(a) for a in self.r))
        if self.kind == DescKind.CONTINUOUS and (not self.r or self.r[-1] != MINUS_ONE):
            raise DescriptionError(f"a continuous R-description ends in -1, got {format_l2(self.r)}")

    @property
    def labels(self) -> tuple:
        return self.r[:-1] if self.kind == DescKind.CONTINUOUS else self.r

    @property
    def is_continuous(self) -> bool:
        return self.kind == DescKind.CONTINUOUS

    @property
    def is_regular(self) -> bool:
        return not self.is_continuous

    @cached_property
    def tower(self) -> Level2Tower:
        return Level2Tower(self.tree, self.deltas, continuous=self.kind != DescKind.DISCONTINUOUS)

    @property
    def dnodes(self) -> tuple:
        """The nodes of X added along the tower, in branch order."""
        return self.tower.signature

    @property
    def discontinuous(self) -> "RDesc":
        """An extended description read as the discontinuous one it extends."""
        if self.kind != DescKind.EXTENDED:
            return self
        return RDesc(self.r, self.tower.prefix(len(self.deltas)).tree, self.deltas)

    def sort_key(self) -> tuple:
        return bk_key(corner_r(self))

    def __str__(self) -> str:
        return f"({format_l2(self.r)}, {self.tree}, ({', '.join(str(d) for d in self.deltas)}))"


def discontinuous_r(R: Level3Tree, r: L3Node) -> RDesc:
    tower = R.tower_at(r)
    return RDesc(r, tower.tree, tower.deltas)


def continuous_r(R: Level3Tree, r: L3Node, Q: Level2Tree) -> RDesc:
    """(r^(-1), Q, R[r] deltas) for a completion Q of R(r)."""
    if Q not in R.partial_at(r).completions():
        raise DescriptionError(f"{Q} is not a completion of R({format_l2(r)})")
    return RDesc(r + (MINUS_ONE,), Q, R.tower_at(r).deltas, DescKind.CONTINUOUS)


def desc_r(R: Level3Tree, extended: bool = False) -> list[RDesc]:
    """desc(R) without the constant, or desc*(R) with ``extended``, sorted by corners."""
    out = [discontinuous_r(R, r) for r in R.dom]
    for r in R.dom:
        if R.delta_at(r).degree == 0:
            continue
        for Q in R.partial_at(r).completions():
            out.append(continuous_r(R, r, Q))
            if extended:
                out.append(RDesc(r, Q, R.tower_at(r).deltas, DescKind.EXTENDED))
    out.sort(key=RDesc.sort_key)
    logger.debug(f"Enumerated {len(out)} R-descriptions")
    return out


def desc_star_r(R: Level3Tree) -> list[RDesc]:
    return desc_r(R, extended=True)


@dataclass(frozen=True)
class RDescGen:
    """A generalized R-description (r, pi, T); all fields None for the constant one."""

    r: Optional[RDesc] = None
    pi: Optional[Level2Factoring] = None
    target: Optional[Level2Tree] = None

    @property
    def is_constant(self) -> bool:
        return self.r is None

    @cached_property
    def corner(self) -> tuple:
        return corner3(self)

    def sort_key(self) -> tuple:
        return bk_key(self.corner)


CONSTANT_R = RDescGen()


def continuity_at(pi: Level2Factoring, T: Level2Tree, point: Designator) -> bool:
    """(pi, T) is continuous at the regular member ``point`` of desc*(Q).

    Degree-0 points count as continuous.

    Raises:
        DescriptionError: For descriptions of continuous type
    """
    d, x = point
    if d == 0:
        return True
    if d == 1:
        below = T.t1.pred(pi.map1[x])
        return below is None or below in pi.range(1)
    if x.is_continuous:
        raise DescriptionError(f"{x} is not regular")
    if x.is_constant:
        return not T.t1.nodes or T.t1.ordered[-1] in pi.range(1)
    image = pi.map2[x.q]
    if x.kind == DescKind.DISCONTINUOUS:
        siblings = T.lower_siblings(image)
        return not siblings or image[:-1] + (max(siblings, key=bk_key),) in pi.range(2)
    kids = T.children(image)
    return not kids or image + (kids[-1],) in pi.range(2)


def pred_node(pi: Level2Factoring, T: Level2Tree, point: Designator) -> DNode:
    """pred(pi, T, point), a node (d, t) of T.

    Raises:
        DescriptionError: If (pi, T) is continuous at ``point``
    """
    if continuity_at(pi, T, point):
        raise DescriptionError(f"({pi.source}, {T}) is continuous at {point}, there is no pred")
    d, x = point
    if d == 1:
        return (1, T.t1.pred(pi.map1[x]))
    if x.is_constant:
        return (1, T.t1.ordered[-1])
    image = pi.map2[x.q]
    if x.kind == DescKind.DISCONTINUOUS:
        return (2, image[:-1] + (max(T.lower_siblings(image), key=bk_key),))
    return (2, image + (T.children(image)[-1],))


def corner3(A: RDescGen) -> tuple:
    """<A>: the labels of r interleaved with [[pi(d_i, q_i)]]_T, closed by -1 or [[pred]]_T."""
    if A.is_constant:
        return ()
    r = A.r.discontinuous
    labels = r.labels
    body: list = []
    for i, a in enumerate(labels):
        body.append(a)
        if i < len(labels) - 1:
            body.append(node_otype(A.target, A.pi(*r.deltas[i].dnode)))
    point = r.tower.ucf
    if continuity_at(A.pi, A.target, point):
        body.append(MINUS_ONE)
    else:
        body.append(node_otype(A.target, pred_node(A.pi, A.target, point)))
    return tuple(body)


def corner_r(r: RDesc) -> tuple:
    """<r> = <(r, Q, id_Q)>."""
    Q = r.discontinuous.tree
    return corner3(RDescGen(r, Level2Factoring.identity(Q), Q))


def prec3(a: RDescGen, b: RDescGen) -> int:
    """-1 if a precedes b, 0 if they are similar, 1 otherwise."""
    ka, kb = a.sort_key(), b.sort_key()
    return (ka > kb) - (ka < kb)


@dataclass(frozen=True)
class YTQDesc:
    """A (Y,T,*)-description (y, pi); ``y`` is None for the constant one.

    ``values`` lists ((e, x), pi(e, x)) over the non-root nodes of X in branch
    order; pi sends the root of X to the constant (T,Q,*)-description.
    """

    y: Optional[RDesc] = None
    values: tuple = ()
    tower: Optional[Level2Tower] = None

    @property
    def is_constant(self) -> bool:
        return self.y is None

    @property
    def X(self) -> Level2Tree:
        return self.y.tree

    @cached_property
    def table(self) -> dict[DNode, TQWDesc]:
        return {(2, L2_ROOT): CONSTANT_TQW, **dict(self.values)}

    def __call__(self, e: int, x: tuple) -> TQWDesc:
        try:
            return self.table[(e, tuple(x))]
        except KeyError:
            raise DescriptionError(f"({e}, {x}) is not a node of X") from None

    @property
    def Q(self) -> Level2Tree:
        return self.tower.tree

    @property
    def last_delta(self) -> Delta:
        return self.tower.deltas[-1]

    @cached_property
    def corner(self) -> tuple:
        """pi (+) y: y(0), pi(e_1, x_1), y(1), ..., closed by -1 for continuous y."""
        if self.is_constant:
            return ()
        body: list = []
        for i, a in enumerate(self.y.labels):
            body.append(a)
            if i < len(self.values):
                body.append(self.values[i][1])
        if self.y.is_continuous:
            body.append(MINUS_ONE)
        return tuple(body)

    def sort_key(self) -> tuple:
        return bk_key(self.corner)

    @property
    def sign(self) -> tuple:
        return contraction([C.sign for _, C in self.values])[0]

    @property
    def ucf(self) -> Designator:
        return self.tower.ucf


CONSTANT_YTQ = YTQDesc()


@lru_cache(maxsize=1024)
def _pool(T: Level2Tree, Q: Level2Tree, tower: Optional[Level1Tower]) -> tuple[TQWDesc, ...]:
    """Non-constant values for a degree-1 node (tower None) or a degree-2 node with the given tower."""
    if tower is None:
        return tuple(degree1_descriptions(T, Q))
    return tuple(C for C in enum_desc_tqw(T, Q, tower, descending=False) if not C.is_constant)


def _minus_sign(C: TQWDesc) -> tuple:
    if C.degree == 1:
        if C.t.degree != 2 or C.t.length == 0:
            return ()
        return TQWDesc(1, C.t.minus).sign
    return C.minus.sign if C.length else ()


def _restricts_within(X: Level2Tree, Q: Level2Tree, x: tuple, C: TQWDesc, table: Mapping) -> bool:
    """pi(2, x) restricts to pi(2, x^-) along the tree of x^-."""
    up = table[(2, x[:-1])]
    try:
        return C.restrict_tower(X.tree_at(x[:-1]), Q).corner == up.corner
    except DescriptionError:
        return False


def _cofinal_value(y: RDesc, table: Mapping) -> Optional[Designator]:
    """The ucf the cofinality clause asks of Q, read from pi at ucf(X, deltas)."""
    e, x = y.tower.ucf
    if e == 0:
        return (0, MINUS_ONE)
    if e == 1:
        return table[(1, x)].ucf
    C = table[(2, x.q)]
    if x.kind == DescKind.EXTENDED:
        try:
            return C.ucf_plus
        except DescriptionError:
            return None
    return C.ucf


def _last_delta(y: RDesc, table: Mapping, Q: Level2Tree) -> Optional[Delta]:
    ucf = _cofinal_value(y, table)
    if ucf is None:
        return None
    if ucf[0] == 0:
        return ZERO_DELTA
    return delta_for_ucf(Q, ucf)


def _increasing(table: Mapping) -> bool:
    ordered = sorted(table, key=bk_key)
    keys = [table[dx].sort_key() for dx in ordered]
    return all(a < b for a, b in zip(keys, keys[1:]))


def _clause4(y: RDesc, values: list, signature: tuple) -> bool:
    """A continuous y whose last signature node is new at its last value needs that value discontinuous."""
    if not signature or not y.is_continuous:
        return True
    signs = [C.sign for _, C in values[:-1]] + [_minus_sign(values[-1][1])]
    if signature[-1] in contraction(signs)[0]:
        return True
    return not values[-1][1].is_continuous


def _factorings(y: RDesc, T: Level2Tree, Q: Level2Tree, signature: tuple) -> Iterable[list]:
    """Value lists over the nodes of X, in branch order, contracting to exactly ``signature``."""
    X = y.tree
    order = list(y.dnodes)

    def extend(i: int, chosen: list, table: dict, seen: int) -> Iterable[list]:
        if i == len(order):
            if seen == len(signature):
                yield list(chosen)
            return
        e, x = order[i]
        pool = _pool(T, Q, None if e == 1 else X.tower_at(x))
        for C in pool:
            after = absorb_signature(signature, seen, C.sign)
            if after is None:
                continue
            if e == 2 and not _restricts_within(X, Q, x, C, table):
                continue
            table[(e, x)] = C
            chosen.append(((e, x), C))
            yield from extend(i + 1, chosen, table, after)
            chosen.pop()
            del table[(e, x)]

    yield from extend(0, [], {(2, L2_ROOT): CONSTANT_TQW}, 0)


@lru_cache(maxsize=64)
def _y_descriptions(Y: Level3Tree) -> tuple[RDesc, ...]:
    """Non-constant members of desc(Y), unsorted."""
    out = [discontinuous_r(Y, r) for r in Y.dom]
    for r in Y.dom:
        if Y.delta_at(r).degree:
            out += [continuous_r(Y, r, Q) for Q in Y.partial_at(r).completions()]
    return tuple(out)


def _candidates_ytq(Y: Level3Tree, T: Level2Tree, Q: Level2Tree, prefix: tuple) -> Iterable[YTQDesc]:
    """(Y,T,*)-descriptions over towers (Q, prefix + (delta,)), delta fixed by the cofinality clause."""
    signature = tuple(delta.dnode for delta in prefix)
    for y in _y_descriptions(Y):
        for values in _factorings(y, T, Q, signature):
            table = {(2, L2_ROOT): CONSTANT_TQW, **dict(values)}
            if not _increasing(table) or not _clause4(y, values, signature):
                continue
            delta = _last_delta(y, table, Q)
            if delta is None:
                continue
            yield YTQDesc(y, tuple(values), Level2Tower(Q, tuple(prefix) + (delta,)))


def enum_desc_ytq(Y: Level3Tree, T: Level2Tree, tower: Level2Tower, descending: bool = True) -> list[YTQDesc]:
    """desc(Y, T, tower), sorted by corners."""
    if tower.length == 0:
        return [CONSTANT_YTQ]
    out = [B for B in _candidates_ytq(Y, T, tower.tree, tower.deltas[:-1]) if B.last_delta == tower.deltas[-1]]
    out.sort(key=YTQDesc.sort_key, reverse=descending)
    logger.debug(f"Enumerated {len(out)} (Y,T,Q)-descriptions over {tower}")
    return out


def check_ytq(B: YTQDesc, Y: Level3Tree, T: Level2Tree, tower: Level2Tower) -> bool:
    return any(B.corner == D.corner for D in enum_desc_ytq(Y, T, tower))


def _lives_in(C: TQWDesc, Q: Level2Tree) -> bool:
    """C is already a (T, Q, *)-description for the subtree Q."""
    if C.degree == 1:
        return all(w in Q.t1 for _, w in C.t.sigma)
    for d in C.tau.range:
        if d.degree == 1 and d.q not in Q.t1:
            return False
        if d.degree == 2 and d.q.node_q not in Q:
            return False
    return True


def _restrict_value(C: TQWDesc, dx: DNode, X: Level2Tree, T: Level2Tree, Q: Level2Tree) -> TQWDesc:
    if C.degree == 1:
        D = restrict_q(C, T, Q)
        return CONSTANT_TQW if D.t.is_constant else D
    targets = enum_desc_tqw(T, Q, X.tower_at(dx[1])) + [CONSTANT_TQW]
    return immediate_successor(C, targets)


def restrict_ytq(B: YTQDesc, Y: Level3Tree, T: Level2Tree, k_bar: int) -> YTQDesc:
    """B | (Y, T, Q_k_bar) for a shorter prefix of the tower of B.

    Let l be least with pi(e_l, x_l) outside desc(T, Q_k_bar, *) and C its
    restriction. If C is pi at ucf(Y[y|l]) the result is y|l with pi cut down;
    otherwise it is y|l^(-1) with (e_l, x_l) sent to C.

    Raises:
        DescriptionError: For the constant description or a prefix that is not shorter
    """
    if B.is_constant or not 0 <= k_bar < B.tower.length:
        raise DescriptionError(f"cannot restrict {B.corner} to a tower of length {k_bar}")
    if k_bar == 0:
        return CONSTANT_YTQ
    target = B.tower.prefix(k_bar)
    Q_bar = target.tree
    for l, (dx, value) in enumerate(B.values, start=1):
        if _lives_in(value, Q_bar):
            continue
        C = _restrict_value(value, dx, B.X, T, Q_bar)
        base = B.y.labels[:l]
        e, x = Y.partial_at(base).ucf
        kept = B.values[: l - 1]
        anchor = B.table[(1, x)] if e == 1 else B.table[(2, x.q)] if e == 2 else None
        deltas = Y.tower_at(base).deltas
        if anchor is None or C.corner != anchor.corner:
            dnodes = [d.dnode for d in deltas[:l]]
            X_l = B.X.restricted([q for d, q in dnodes if d == 1], [q for d, q in dnodes if d == 2])
            y = RDesc(base + (MINUS_ONE,), X_l, deltas, DescKind.CONTINUOUS)
            return YTQDesc(y, kept + ((dx, C),), target)
        return YTQDesc(RDesc(base, Y.tree_at(base), deltas), kept, target)
    raise DescriptionError(f"{B.corner} already lives over {Q_bar}")


@dataclass(frozen=True)
class YTTensor:
    """A representation (U, rho) of Y (x) T."""

    tree: Level3Tree
    rho: tuple

    @cached_property
    def table(self) -> dict[L3Node, YTQDesc]:
        return {L3_ROOT: CONSTANT_YTQ, **dict(self.rho)}

    def __call__(self, r: L3Node) -> YTQDesc:
        try:
            return self.table[tuple(tuple(a) for a in r)]
        except KeyError:
            raise TreeValidationError(f"{format_l2(r)} is not a node of the tensor product") from None

    def node_of(self, B: YTQDesc) -> L3Node:
        for r, D in self.rho:
            if D.corner == B.corner:
                return r
        raise DescriptionError(f"{B.corner} is not a node of the tensor product")

    def listing(self) -> list[tuple[L3Node, YTQDesc]]:
        """Nodes in <_BK descending order: each node before its extensions, larger siblings first."""
        return sorted(self.rho, key=lambda item: bk_key(item[0]), reverse=True)


def _all_descriptions(Y: Level3Tree, T: Level2Tree, max_length: Optional[int]) -> list[YTQDesc]:
    """Every non-constant (Y,T,*)-description, tower by tower from Q^0."""
    seen: set = set()
    frontier: list[tuple[Level2Tree, tuple]] = [(Q0, ())]
    out: list[YTQDesc] = []
    while frontier:
        Q, prefix = frontier.pop(0)
        if (Q, prefix) in seen:
            continue
        seen.add((Q, prefix))
        for B in _candidates_ytq(Y, T, Q, prefix):
            out.append(B)
            if B.last_delta.degree == 0 or (max_length is not None and B.tower.length >= max_length):
                continue
            frontier += [(C, B.tower.deltas) for C in B.tower.last.completions()]
    logger.debug(f"Enumerated {len(out)} (Y,T,*)-descriptions over {len(seen)} towers")
    return out


def tensor_yt(Y: Level3Tree, T: Level2Tree, max_length: Optional[int] = None) -> YTTensor:
    """Build U and rho from all (Y,T,*)-descriptions: the parent of a node is
    its restriction to the shorter tower, and children are labelled (0), (1),
    ... in <-ascending order."""
    by_length: dict[int, list[YTQDesc]] = {}
    for B in _all_descriptions(Y, T, max_length):
        by_length.setdefault(B.tower.length, []).append(B)
    rho: dict[L3Node, YTQDesc] = {}
    nodes: dict[tuple, L3Node] = {(): L3_ROOT}
    for k in sorted(by_length):
        kids: dict[L3Node, list[YTQDesc]] = {}
        for D in by_length[k]:
            try:
                up = CONSTANT_YTQ if k == 1 else restrict_ytq(D, Y, T, k - 1)
            except DescriptionError as e:
                logger.debug(f"{D.corner} has no restriction: {e}")
                continue
            parent = nodes.get(up.corner)
            if parent is None:
                logger.debug(f"{D.corner} restricts to {up.corner}, which is not a node")
                continue
            kids.setdefault(parent, []).append(D)
        for parent, found in kids.items():
            for a, D in enumerate(sorted(found, key=YTQDesc.sort_key)):
                child = parent + ((a,),)
                rho[child] = D
                nodes[D.corner] = child
    U = Level3Tree.build({r: (B.Q, B.last_delta) for r, B in rho.items()})
    logger.debug(f"Y (x) T has {len(U)} nodes")
    return YTTensor(U, tuple(sorted(rho.items(), key=lambda kv: bk_key(kv[0]))))


def _in_q0_part(B: YTQDesc) -> bool:
    """B already lives in Y (x) Q^0: every value is (2, ((-1), {(0)}, ((0))), tau)."""
    return all(C.degree == 2 and C.t == LEAST_CONTINUOUS for _, C in B.values)


def tensor_yt_at(Y: Level3Tree, y: L3Node, T: Level2Tree) -> Level3Tree:
    """Y (x)_y T: the nodes of Y (x) Q^0 plus the descriptions (y, tau) for the discontinuous y.

    Raises:
        TreeValidationError: If y is not a node of Y
    """
    y = tuple(tuple(a) for a in y)
    if y not in Y:
        raise TreeValidationError(f"{format_l2(y)} is not in the domain of Y")
    full = tensor_yt(Y, T)
    wanted = discontinuous_r(Y, y)
    keep = [r for r, B in full.rho if B.y == wanted or _in_q0_part(B)]
    return full.tree.restricted(keep)


def factor_check_ryt(rho: Mapping[L3Node, YTQDesc], R: Level3Tree, Y: Level3Tree, T: Level2Tree) -> bool:
    """rho factors (R, Y, T)."""
    table = {tuple(tuple(a) for a in r): B for r, B in rho.items()}
    if table.get(L3_ROOT, CONSTANT_YTQ).corner != ():
        logger.debug("rho does not send the root to the constant description")
        return False
    if set(table) - {L3_ROOT} != set(R.dom):
        logger.debug("Map domain differs from dom(R)")
        return False
    for r in R.dom:
        if not check_ytq(table[r], Y, T, R.tower_at(r)):
            logger.debug(f"rho({format_l2(r)}) is not a description over R[{format_l2(r)}]")
            return False
    for r in (L3_ROOT, *R.dom):
        kids = [r + (a,) for a in R.children(r)]
        for i, a in enumerate(kids):
            for b in kids[i + 1 :]:
                if R.tree_at(a) == R.tree_at(b) and not table[a].sort_key() < table[b].sort_key():
                    logger.debug(f"rho is not increasing at {format_l2(a)}, {format_l2(b)}")
                    return False
    for r in R.dom:
        up = table.get(r[:-1], CONSTANT_YTQ)
        try:
            restricted = restrict_ytq(table[r], Y, T, len(r) - 1)
        except DescriptionError:
            return False
        if restricted.corner != up.corner:
            logger.debug(f"rho({format_l2(r)}) does not restrict to its parent's value")
            return False
    return True


def id_ystar(Y: Level3Tree) -> dict[L3Node, YTQDesc]:
    """id_{Y,*}, factoring (Y, Y, Q^0): y goes to ((y, X, deltas), id_{*,X})."""
    out: dict[L3Node, YTQDesc] = {L3_ROOT: CONSTANT_YTQ}
    for r in Y.dom:
        y = discontinuous_r(Y, r)
        ident = id_start(y.tree)
        out[r] = YTQDesc(y, tuple((dx, ident[dx]) for dx in y.dnodes), Y.tower_at(r))
    return out


def _node_value(U: Level2Tree, node: DNode) -> QWDesc:
    """A node of U read as a (U, *)-description."""
    d, u = node
    if d == 1:
        return QWDesc(1, u)
    x = discontinuous_desc(U, u)
    return QWDesc(2, x, {p: p for p in x.tree.nodes})


@lru_cache(maxsize=64)
def _tensor(T: Level2Tree, U: Level2Tree) -> TQTensor:
    return tensor_tq(T, U)


def factoring_into(X: Level2Tree, values: Mapping[DNode, TQWDesc], TU: TQTensor) -> Level2Factoring:
    """Read a map from dom(X) into desc(T, U, *) as a level <=2 factoring of (X, T (x) U).

    Raises:
        DescriptionError: If a node is sent to a node of the other degree
    """
    one, two = {}, {}
    for (e, x), C in values.items():
        d, node = TU.node_of(C)
        if d != e:
            raise DescriptionError(f"({e}, {x}) is sent to a degree-{d} node of the tensor product")
        (one if e == 1 else two)[x] = node
    return Level2Factoring(X, TU.tree, one, two)


def moved_values(rho: Mapping[L3Node, YTQDesc], A: RDescGen) -> tuple[RDesc, dict[DNode, TQWDesc]]:
    """The Y-description and the (T, U, *)-values behind rho~^T(A).

    A discontinuous r moves every value of rho(r) along T (x) pi. A continuous
    r over a discontinuous y extends y by the completion named by the new
    value (2, ((-1), {(0)}, ((0))), (0) -> pi(d_l, z_l)); over a continuous y
    the last discontinuous value (2, t, tau) becomes (2, t^(-1), tau + {s_m -> pi(d_l, z_l)}).

    Raises:
        DescriptionError: If no value of a continuous y is a discontinuous degree-2 description
    """
    psi, U = A.pi, A.target
    r = A.r
    if not r.is_continuous:
        B = rho[r.r]
        values = {dx: tensor_map_right(psi, C) for dx, C in B.values}
        values[(2, L2_ROOT)] = CONSTANT_TQW
        return B.y, values
    B = rho[r.labels]
    y = B.y
    new = _node_value(U, psi(*r.deltas[-1].dnode))
    if not y.is_continuous:
        C = TQWDesc(2, LEAST_CONTINUOUS, FactorSQW(LEAST_CONTINUOUS.tree, {(0,): new}))
        last = y.deltas[-1]
        if last.degree == 0:
            raise DescriptionError(f"{y} ends in a degree-0 delta and has no continuous extension")
        partial = PartialLevel2(y.tree, last)
        X_plus = partial.completion_with(C.tower.pending if last.degree == 2 else None)
        values = {dx: tensor_map_right(psi, D) for dx, D in B.values}
        values[last.dnode] = C
        values[(2, L2_ROOT)] = CONSTANT_TQW
        return RDesc(y.r + (MINUS_ONE,), X_plus, y.deltas, DescKind.CONTINUOUS), values
    moved = {dx: tensor_map_right(psi, D) for dx, D in B.values}
    extendable = [(dx, D) for dx, D in B.values if D.degree == 2 and not D.t.is_continuous and D.t.nodes[-1] != MINUS_ONE]
    if not extendable:
        raise DescriptionError(f"no value of the continuous {y} is a discontinuous degree-2 description")
    dx, D = extendable[-1]
    t = D.t
    s_m = t.nodes[t.length]
    extended = QDesc(t.q + (MINUS_ONE,), t.tree.completion(s_m), t.nodes, DescKind.CONTINUOUS)
    table = {s: d for s, d in moved[dx].tau.values}
    table[s_m] = new
    moved[dx] = TQWDesc(2, extended, FactorSQW(extended.tree, table))
    moved[(2, L2_ROOT)] = CONSTANT_TQW
    return y, moved


def rho_tilde(rho: Mapping[L3Node, YTQDesc], T: Level2Tree, A: RDescGen) -> RDescGen:
    """rho~^T(A), a generalized Y-description landing in T (x) U."""
    if A.is_constant:
        return A
    TU = _tensor(T, A.target)
    y, values = moved_values(rho, A)
    return RDescGen(y, factoring_into(y.tree, values, TU), TU.tree)
