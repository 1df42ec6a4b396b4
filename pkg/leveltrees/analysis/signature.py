"""Signatures, induced towers and the respects predicate.

The ordinal of a potential partial level <=2 tower is the order type of the
one-branch level-3 tree built from it, so R^0, R^1 and R^2 give omega, u_1 and
u_2. Going back from an ordinal searches the towers whose tree is the given base.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Any, Iterable, Iterator, Mapping, Sequence, Union

from leveltrees.analysis.otype import node_otype
from leveltrees.ordinals.bk import bk_key
from leveltrees.ordinals.cnf import CnfOrdinal, Exponent, OrdinalDomainError
from leveltrees.ordinals.uterm import UTerm, hat
from leveltrees.trees.level1 import MINUS_ONE, ROOT, Level1Tower, Level1Tree, TreeValidationError
from leveltrees.trees.level2 import Level2Tree, Q0
from leveltrees.trees.level3 import Level3Tree
from leveltrees.trees.towers import ZERO_DELTA, Delta, Designator, Level2Tower, PartialLevel2

logger = logging.getLogger(__name__)


class Continuity(str, Enum):
    CONTINUOUS = "continuous"
    DISCONTINUOUS = "discontinuous"


@dataclass(frozen=True)
class OrdinalAnalysis:
    """Signature, approximation sequence, induced tower and cofinality of an ordinal."""

    signature: tuple
    approximation: tuple
    tower: Union[Level1Tower, Level2Tower]
    continuity: Continuity
    ucf: Designator


def _last_exponent(u: UTerm) -> Exponent:
    if u.is_zero:
        raise OrdinalDomainError("0 is not a limit ordinal")
    return u.preimage.terms[-1]


def _factors(e: Exponent) -> list[int]:
    """u-indices of the factors of the monomial hat(omega^e), largest first."""
    return [power + 1 for power, count in e for _ in range(count)]


def _product(indices: Sequence[int]) -> Exponent:
    pairs: list[tuple[int, int]] = []
    for n in indices:
        if pairs and pairs[-1][0] == n - 1:
            pairs[-1] = (n - 1, pairs[-1][1] + 1)
        else:
            pairs.append((n - 1, 1))
    return tuple(pairs)


# A u-expression read as a sum of monomials, each a descending tuple of
# coordinates; () is omega.
Monomials = list[tuple[int, ...]]


def _signature1(terms: Monomials) -> tuple[int, ...]:
    """The coordinates of u in significance order: leading terms first, larger factors first."""
    seen: list[int] = []
    for m in terms:
        seen += [c for c in m if c not in seen]
    return tuple(seen)


def _sup_out(terms: Monomials, y: int, bound: int) -> Monomials:
    """sup_{y < bound}: later terms are absorbed and the first term holding y keeps its factors above y."""
    for k, m in enumerate(terms):
        if y in m:
            return terms[:k] + [tuple(sorted([c for c in m if c > y] + [bound], reverse=True))]
    return terms


def _approximation1(terms: Monomials, signature: tuple[int, ...], i: int) -> UTerm:
    """Fix the i most significant coordinates and take the sup over the others, least first."""
    fixed = sorted(signature[:i])
    top = max(signature) + 1
    for y in sorted(c for c in signature if c not in fixed):
        bound = min((c for c in signature if c > y), default=top)
        terms = _sup_out(terms, y, bound)
    renumber = {c: n + 1 for n, c in enumerate(fixed)}
    renumber[top] = i + 1
    return UTerm(CnfOrdinal.from_exponents(_product([renumber[c] for c in m]) for m in terms))


def analyze1(u: UTerm) -> OrdinalAnalysis:
    """Level-1 analysis of u < u_omega.

    Each u-index in u is a coordinate. Coordinate l becomes a new child of the
    node of the least larger coordinate placed so far, or of the root. u is
    continuous when its last monomial has coefficient 1, is not omega and holds
    the least coordinate; otherwise the last monomial picks the pending node.

    Raises:
        OrdinalDomainError: For 0
    """
    last = _last_exponent(u)
    if u == UTerm.u(1):
        return OrdinalAnalysis((), (u,), Level1Tower(((0,),)), Continuity.DISCONTINUOUS, (1, ROOT))
    terms: Monomials = [tuple(_factors(e)) for e in u.preimage.terms]
    signature = _signature1(terms)
    nodes: dict[int, tuple] = {}
    used: dict[tuple, int] = {}
    for c in signature:
        up = nodes[min(p for p in nodes if p > c)] if any(p > c for p in nodes) else ROOT
        nodes[c] = up + (used.get(up, 0),)
        used[up] = used.get(up, 0) + 1
    placed = [nodes[c] for c in signature]
    approximation = tuple(_approximation1(terms, signature, i) for i in range(len(signature)))
    single = len(terms) == 1 or terms[-2] != terms[-1]
    if single and last != () and min(signature) in terms[-1]:
        ucf = (1, nodes[min(signature)])
        return OrdinalAnalysis(signature, approximation, Level1Tower(tuple(placed)), Continuity.CONTINUOUS, ucf)
    if last == ():
        pending = MINUS_ONE
        ucf = (0, MINUS_ONE)
    else:
        up = nodes[min(terms[-1])]
        pending = up + (used.get(up, 0),)
        ucf = (1, up)
    tower = Level1Tower(tuple(placed) + (pending,))
    return OrdinalAnalysis(signature, approximation + (u,), tower, Continuity.DISCONTINUOUS, ucf)


def new_deltas(Q: Level2Tree) -> list[Delta]:
    """Every legal pending node of Q: degree 0, the new nodes of 1Q, then the new nodes of 2Q."""
    out = [ZERO_DELTA] + [Delta(1, x) for x in Q.t1.new_nodes()]
    for q in Q.dom:
        entry = Q.entry(q)
        if entry.node == MINUS_ONE:
            continue
        out += [Delta(2, q + (a,), entry.completion) for a in Q.new_labels(q)]
    return out


def enum_towers(max_length: int, base: Level2Tree = Q0) -> Iterator[Level2Tower]:
    """Discontinuous towers starting at ``base``, shortest first."""
    frontier: list[tuple[Level2Tree, tuple]] = [(base, ())]
    for _ in range(max_length):
        grown = []
        for Q, deltas in frontier:
            for delta in new_deltas(Q):
                yield Level2Tower(Q, deltas + (delta,))
                if delta.degree:
                    grown += [(C, deltas + (delta,)) for C in PartialLevel2(Q, delta).completions()]
        frontier = grown


def _growths(Q: Level2Tree, base: Level2Tree, deltas: tuple = ()) -> Iterator[tuple]:
    """Delta sequences growing Q into ``base`` one node at a time."""
    if Q == base:
        yield deltas
        return
    for delta in new_deltas(Q):
        if not delta.degree:
            continue
        for C in PartialLevel2(Q, delta).completions():
            if C.is_subtree_of(base):
                yield from _growths(C, base, deltas + (delta,))


def towers_over(base: Level2Tree, continuous: bool = False) -> Iterator[Level2Tower]:
    """Towers from Q^0 whose tree is ``base``: a pending delta of ``base`` each, or none when continuous."""
    for deltas in _growths(Q0, base):
        if continuous:
            if deltas:
                yield Level2Tower(base, deltas, continuous=True)
            continue
        for delta in new_deltas(base):
            yield Level2Tower(base, deltas + (delta,))


def branch_tree(tower: Level2Tower) -> Level3Tree:
    """The level-3 tree with one branch ((0), (0), ...) carrying the deltas of ``tower``."""
    table = {}
    for i in range(1, tower.length + 1):
        table[((0,),) * i] = (tower.prefix(i).tree, tower.deltas[i - 1])
    return Level3Tree.build(table)


def ord_of_tower(tower: Level2Tower) -> UTerm:
    """The ordinal inducing ``tower``.

    Raises:
        TreeValidationError: For continuous or empty towers
    """
    if tower.continuous or not tower.deltas:
        raise TreeValidationError(f"{tower} is not a nonempty discontinuous tower")
    return node_otype(branch_tree(tower))


def tower_of_ord(u: UTerm, base: Level2Tree = Q0) -> Level2Tower:
    """The first discontinuous tower with tree ``base`` whose ordinal is u.

    Raises:
        OrdinalDomainError: If no tower over ``base`` induces u
    """
    for tower in towers_over(base):
        if ord_of_tower(tower) == u:
            return tower
    raise OrdinalDomainError(f"no tower over {base} is induced by {u}")


def _cofinality(u: UTerm) -> int:
    """0 for omega-cofinal, 1 for omega_1-cofinal, 2 above."""
    factors = _factors(_last_exponent(u))
    if not factors:
        return 0
    return 1 if factors[-1] == 1 else 2


def _prefix_ords(tower: Level2Tower) -> tuple[UTerm, ...]:
    return tuple(ord_of_tower(tower.prefix(i)) for i in range(1, tower.length + 1))


def analyze2(u: UTerm, base: Level2Tree = Q0) -> OrdinalAnalysis:
    """Level <=2 analysis of u over ``base``.

    A discontinuous tower over ``base`` inducing u is read first. Otherwise u
    is continuous when a continuous tower C over ``base`` has C followed by a
    degree-0 delta inducing u + omega. Over Q^0 the length-1 tower whose delta
    degree is the cofinality of u is the fallback.

    Raises:
        OrdinalDomainError: For 0, or if no tower over ``base`` is induced by u
    """
    cf = _cofinality(u)
    try:
        tower = tower_of_ord(u, base)
    except OrdinalDomainError:
        tower = None
    if tower is not None:
        logger.debug(f"{u} induces {tower}")
        return OrdinalAnalysis(tower.signature, _prefix_ords(tower), tower, Continuity.DISCONTINUOUS, tower.ucf)
    if cf:
        target = u + UTerm.omega(1)
        for C in towers_over(base, continuous=True):
            if ord_of_tower(Level2Tower(base, C.deltas + (ZERO_DELTA,))) == target:
                logger.debug(f"{u} is the continuous limit of {C}")
                return OrdinalAnalysis(C.signature, _prefix_ords(C), C, Continuity.CONTINUOUS, C.ucf)
    if base == Q0:
        delta = next(d for d in new_deltas(Q0) if d.degree == cf)
        tower = Level2Tower(Q0, (delta,))
        return OrdinalAnalysis((), (u,), tower, Continuity.DISCONTINUOUS, tower.ucf)
    raise OrdinalDomainError(f"no tower over {base} is induced by {u}")


def _increasing(values: Sequence[UTerm]) -> bool:
    return all(a < b for a, b in zip(values, values[1:]))


def _countable_limits(values: Iterable[UTerm]) -> bool:
    return all(not v.is_zero and all(e == () for e in v.preimage.terms) for v in values)


def _respects1(tree: Level1Tree, labels: Mapping[Any, UTerm]) -> bool:
    values = [labels[x] for x in tree.ordered]
    return _countable_limits(values) and _increasing(values)


def _respects2(tree: Level2Tree, labels: Mapping[Any, UTerm]) -> bool:
    ones = [labels[(1, x)] for x in tree.t1.ordered]
    if not (_countable_limits(ones) and _increasing(ones)):
        return False
    for q in tree.dom:
        try:
            result = analyze1(labels[(2, q)])
        except OrdinalDomainError:
            return False
        if result.continuity != Continuity.DISCONTINUOUS or result.tower != tree.tower_at(q):
            logger.debug(f"Label {labels[(2, q)]} does not induce the tower at {q}")
            return False
        if result.approximation != tuple(labels[(2, q[:l])] for l in range(len(q) + 1)):
            logger.debug(f"Labels along {q} are not the approximations of {labels[(2, q)]}")
            return False
        if not _increasing([labels[(2, q + (a,))] for a in tree.children(q)]):
            return False
    return True


def _respects3(tree: Level3Tree, labels: Mapping[Any, UTerm]) -> bool:
    marked = [r for r in tree.dom if r in labels]
    for r in marked:
        if len(r) == 1:
            if _cofinality(labels[r]) != tree.delta_at(r).degree:
                return False
            continue
        if any(labels[r[:l]] < labels[r] for l in range(1, len(r))):
            return False
    for up in {r[:-1] for r in marked}:
        kids = sorted((r for r in marked if r[:-1] == up), key=bk_key)
        for a, b in zip(kids, kids[1:]):
            if tree.tree_at(a) == tree.tree_at(b) and not labels[a] < labels[b]:
                return False
    return True


def respects_check(tree: Union[Level1Tree, Level2Tree, Level3Tree], labels: Mapping[Any, UTerm]) -> bool:
    """The labels respect the tree.

    Level-1 labels are countable limits increasing along <_BK. A level <=2
    label at q induces the tower 2Q[q], with the labels along the branch of q
    as its approximations, and siblings increase. Level-3 labels at length-1
    nodes have the cofinality their degree asks for, deeper labels sit below
    the labels of their prefixes, and siblings carrying equal trees increase.
    Level <=2 labels are keyed by (d, x).
    """
    check = {Level1Tree: _respects1, Level2Tree: _respects2, Level3Tree: _respects3}[type(tree)]
    try:
        return check(tree, labels)
    except KeyError as e:
        logger.debug(f"Missing label for {e}")
        return False


def otype_labels(tree: Union[Level1Tree, Level2Tree, Level3Tree]) -> dict:
    """[[.]] of every node, keyed the way ``respects_check`` reads labels."""
    if isinstance(tree, Level1Tree):
        return {x: node_otype(tree, x) for x in tree.ordered}
    if isinstance(tree, Level2Tree):
        out = {(1, x): node_otype(tree, (1, x)) for x in tree.t1.ordered}
        out.update({(2, q): node_otype(tree, (2, q)) for q in tree.dom})
        return out
    return {r: node_otype(tree, r) for r in tree.dom}


def rinf_fragment(xs: Iterable[CnfOrdinal]) -> Level3Tree:
    """The finite piece of R^infinity spanned by the given ordinals.

    The i-th least ordinal xi becomes the node (i) carrying the Q^0 tower
    that hat(xi) induces.

    Raises:
        OrdinalDomainError: If the ordinals are not strictly increasing, or one is 0
    """
    xs = list(xs)
    if any(not a < b for a, b in zip(xs, xs[1:])):
        raise OrdinalDomainError("the ordinals of an R^infinity fragment must increase")
    table = {}
    for i, xi in enumerate(xs):
        tower = analyze2(hat(xi)).tower
        for j in range(1, tower.length + 1):
            table[((i,),) + ((0,),) * (j - 1)] = (tower.prefix(j).tree, tower.deltas[j - 1])
    R = Level3Tree.build(table)
    logger.debug(f"R^infinity fragment has {len(R)} nodes")
    return R
