"""Minimal factoring, minimality checks and amalgamation of labelled trees.

A factoring is minimal when every node keeps its order type [[.]] in the
target. The factorings below are built node by node, parents first, each node
going to the least tensor description that carries its order type. The second
factor starts at Q^0 and grows only when a node finds no image.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Callable, Iterator, Mapping, Optional, Union

from leveltrees.analysis.otype import node_otype
from leveltrees.analysis.signature import new_deltas, respects_check
from leveltrees.config import get_settings
from leveltrees.descriptions.qw import FactorSQW, FactoringError, factor_check_sqw, tensor_qw
from leveltrees.descriptions.tqw import TQTensor, TQWDesc, tensor_tq
from leveltrees.descriptions.qdesc import DescriptionError
from leveltrees.descriptions.ytq import YTQDesc, YTTensor, tensor_yt
from leveltrees.ordinals.bk import bk_key
from leveltrees.ordinals.uterm import UTerm
from leveltrees.trees.level1 import ROOT, Level1Tree, Node, TreeValidationError
from leveltrees.trees.level2 import L2_ROOT, Level2Factoring, Level2Tree, Q0, factor_check_l2, format_l2
from leveltrees.trees.level3 import L3Node, Level3Factoring, Level3Tree, factor_check_l3
from leveltrees.trees.towers import PartialLevel2

logger = logging.getLogger(__name__)

Tree = Union[Level1Tree, Level2Tree, Level3Tree]


class SearchCapExceeded(RuntimeError):
    """A bounded search ran past its configured cap without an answer."""

    pass


class AmalgamationError(ValueError):
    """Two labelled trees carry labels that no common tree can hold."""

    pass


@dataclass(frozen=True)
class MinimalL2:
    """(Q, psi) with psi minimally factoring (X, T (x) Q); ``tensor`` represents T (x) Q."""

    Q: Level2Tree
    psi: Level2Factoring
    tensor: TQTensor

    @property
    def pi(self) -> dict[tuple, TQWDesc]:
        """The (X, T, Q)-factoring: psi followed by the representation of T (x) Q."""
        out = {(1, x): self.tensor(*self.psi(1, x)) for x in self.psi.map1}
        out.update({(2, q): self.tensor(*self.psi(2, q)) for q in self.psi.map2 if q != L2_ROOT})
        return out


@dataclass(frozen=True)
class MinimalL3:
    """(T, rho, B): rho minimally factors (R, Y (x) T); B is set when [[root]]_R < [[root]]_Y."""

    T: Level2Tree
    rho: Level3Factoring
    tensor: YTTensor
    top: Optional[L3Node] = None


def minimal_factor_l1(S: Level1Tree, Q: Level2Tree, W: Level1Tree, tau: Optional[FactorSQW] = None) -> dict[Node, Node]:
    """psi: S -> Q (x) W sending s to the node of tau(s).

    Without tau, the k-th least node of S goes to the k-th least node of Q (x) W,
    the only choice that keeps every order type.

    Raises:
        FactoringError: If tau does not factor (S, Q, W), or Q (x) W is too small for S
    """
    U = tensor_qw(Q, W)
    if tau is None:
        if len(S) > len(U.tree):
            raise FactoringError(f"{S} has {len(S)} nodes but Q (x) W only {len(U.tree)}")
        return {s: U.tree.ordered[i] for i, s in enumerate(S.ordered)}
    if tau.tree != S or not factor_check_sqw(tau, Q, W):
        raise FactoringError(f"tau does not factor ({S}, Q, W)")
    psi = {s: U.node_of(tau(s)) for s in S.ordered}
    logger.debug(f"psi sends {len(psi)} nodes into Q (x) W")
    return psi


def _size(Q: Level2Tree) -> int:
    return len(Q.t1) + len(Q.dom) - 1


def _grow(Q: Level2Tree) -> Iterator[Level2Tree]:
    for delta in new_deltas(Q):
        if delta.degree:
            yield from PartialLevel2(Q, delta).completions()


def candidate_trees(cap: int, start: Level2Tree = Q0) -> Iterator[Level2Tree]:
    """Level <=2 trees grown from ``start`` one node at a time, in order of size.

    Raises:
        SearchCapExceeded: Once every tree with ``cap`` more nodes has been handed out
    """
    layer = [start]
    size = 0
    while True:
        yield from layer
        if size >= cap:
            logger.warning(f"Search cap {cap} reached")
            raise SearchCapExceeded(f"no level <=2 tree with at most {cap} nodes answers the search")
        seen: dict[tuple, Level2Tree] = {}
        for Q in layer:
            for C in _grow(Q):
                seen.setdefault(C.sort_key(), C)
        layer = list(seen.values())
        size += 1
        logger.debug(f"{len(layer)} candidate trees of size {size}")


def _regrow(start: Level2Tree, budget: int, build: Callable[[Level2Tree], Any], image: Callable[[Any], Any]) -> tuple:
    """The least tree above ``start`` whose tensor product has an image for the pending node.

    Raises:
        SearchCapExceeded: If no tree within ``budget`` more nodes has one
    """
    for C in candidate_trees(budget, start):
        if C == start:
            continue
        U = build(C)
        try:
            found = image(U)
        except (DescriptionError, TreeValidationError):
            continue
        if found is not None:
            return C, U, found
    raise SearchCapExceeded(f"no tree within {budget} more nodes")  # pragma: no cover


def _order_l2(X: Level2Tree) -> list[tuple]:
    """Nodes of X with every node after its parent."""
    ones = sorted(X.t1.nodes, key=lambda x: (len(x), bk_key(x)))
    twos = sorted((q for q in X.dom if q != L2_ROOT), key=lambda q: (len(q), bk_key(q)))
    return [(1, x) for x in ones] + [(2, q) for q in twos]


def _image_l2(X: Level2Tree, U: TQTensor, node: tuple, chosen: dict) -> Optional[TQWDesc]:
    """The least description of T (x) Q with the order type of ``node`` below the image of its parent."""
    d, x = node
    up = x[:-1]
    base = up if up == () else U.node_of(chosen[(d, up)])[1]
    taken = {D.corner for D in chosen.values()}
    want = node_otype(X, node)
    for (e, y), D in sorted(U.pi, key=lambda item: item[1].sort_key()):
        if e != d or len(y) != len(x) or y[:-1] != base or D.corner in taken:
            continue
        if node_otype(U.tree, (e, y)) == want:
            return D
    return None


def minimal_factor_l2(X: Level2Tree, T: Level2Tree, cap: Optional[int] = None) -> MinimalL2:
    """(Q, psi) with psi minimally factoring (X, T (x) Q), built node by node.

    The nodes of X are placed parents first. Each goes to the least
    description of T (x) Q with its order type; Q grows only when there is
    none, by the least trees that supply one.

    Raises:
        SearchCapExceeded: If Q would need more than ``cap`` nodes (default: settings.search_cap)
        FactoringError: If the images do not factor X
    """
    cap = cap if cap is not None else get_settings().search_cap
    Q = Q0
    U = tensor_tq(T, Q)
    chosen: dict[tuple, TQWDesc] = {}
    for node in _order_l2(X):
        D = _image_l2(X, U, node, chosen)
        if D is None:
            Q, U, D = _regrow(Q, cap - _size(Q), lambda C: tensor_tq(T, C), lambda V: _image_l2(X, V, node, chosen))
            logger.debug(f"Q grew to {_size(Q)} nodes for {node}")
        chosen[node] = D
    one = {x: U.node_of(D)[1] for (d, x), D in chosen.items() if d == 1}
    two = {x: U.node_of(D)[1] for (d, x), D in chosen.items() if d == 2}
    psi = Level2Factoring(X, U.tree, one, two)
    if not factor_check_l2(psi):
        raise FactoringError(f"the order type images of {X} do not factor it")
    logger.info(f"Minimal factoring found; Q has {_size(Q)} nodes")
    return MinimalL2(Q, psi, U)


def _tops(R: Level3Tree) -> list[L3Node]:
    return sorted((r for r in R.dom if len(r) == 1), key=bk_key)


def _kids(R: Level3Tree, r: L3Node) -> list[L3Node]:
    return [r + (a,) for a in sorted(R.children(r), key=bk_key)]


def _image_l3(R: Level3Tree, U: YTTensor, r: L3Node, chosen: dict) -> Optional[YTQDesc]:
    """The least node of Y (x) T for r: same entry, below the image of its parent, above the
    images of lower siblings with the same tree. Length-1 nodes also keep their order type;
    deeper nodes prefer one that does."""
    tree = U.tree
    pool = _tops(tree) if len(r) == 1 else _kids(tree, U.node_of(chosen[r[:-1]]))
    taken = {B.corner for B in chosen.values()}
    lower = [
        U.node_of(B)
        for s, B in chosen.items()
        if s[:-1] == r[:-1] and R.tree_at(s) == R.tree_at(r) and bk_key(s[-1]) < bk_key(r[-1])
    ]
    fits = [
        u
        for u in pool
        if tree.entry(u) == R.entry(r) and U(u).corner not in taken and all(bk_key(v[-1]) < bk_key(u[-1]) for v in lower)
    ]
    want = node_otype(R, r)
    exact = [u for u in fits if node_otype(tree, u) == want]
    pick = exact if len(r) == 1 else exact or fits
    return U(pick[0]) if pick else None


def _top_with(U: YTTensor, value: UTerm) -> Optional[YTQDesc]:
    return next((U(u) for u in _tops(U.tree) if node_otype(U.tree, u) == value), None)


def minimal_factor_l3(R: Level3Tree, Y: Level3Tree, cap: Optional[int] = None) -> MinimalL3:
    """(T, rho, B) with rho minimally factoring (R, Y (x) T), built node by node.

    The nodes of R are placed parents first, siblings in <_BK order; T grows
    only when a node has no image. When [[root]]_R < [[root]]_Y, B is a
    length-1 node of Y (x) T of order type [[root]]_R.

    Raises:
        FactoringError: If [[root]]_R > [[root]]_Y, or the images do not factor R
        SearchCapExceeded: If T would need more than ``cap`` nodes (default: settings.search_cap)
    """
    root_r, root_y = node_otype(R), node_otype(Y)
    if root_r > root_y:
        raise FactoringError(f"[[root]] of R is {root_r}, above {root_y} of Y")
    cap = cap if cap is not None else get_settings().search_cap
    T = Q0
    U = tensor_yt(Y, T)
    chosen: dict[L3Node, YTQDesc] = {}
    for r in sorted(R.dom, key=lambda r: (len(r), bk_key(r))):
        B = _image_l3(R, U, r, chosen)
        if B is None:
            T, U, B = _regrow(T, cap - _size(T), lambda C: tensor_yt(Y, C), lambda V: _image_l3(R, V, r, chosen))
            logger.debug(f"T grew to {_size(T)} nodes for {format_l2(r)}")
        chosen[r] = B
    top = None
    if root_r < root_y:
        top = _top_with(U, root_r)
        if top is None:
            T, U, top = _regrow(T, cap - _size(T), lambda C: tensor_yt(Y, C), lambda V: _top_with(V, root_r))
    rho = Level3Factoring(R, U.tree, {r: U.node_of(B) for r, B in chosen.items()})
    if not factor_check_l3(rho):
        raise FactoringError(f"the images of {len(chosen)} nodes do not factor R")
    logger.info(f"Minimal factoring found; T has {_size(T)} nodes")
    return MinimalL3(T, rho, U, None if top is None else U.node_of(top))


def is_minimal(factoring: Any, source: Optional[Tree] = None, target: Optional[Tree] = None) -> bool:
    """factoring is a factoring that keeps [[.]] at every node.

    Level-1 factorings are plain node maps and need ``source`` and ``target``;
    level <=2 and level-3 factorings carry their trees. Roots are not compared:
    the root of the target may have a larger order type.
    """
    if isinstance(factoring, Level2Factoring):
        X, T = factoring.source, factoring.target
        if not factor_check_l2(factoring):
            return False
        pairs = [((1, x), factoring(1, x)) for x in X.t1.ordered]
        pairs += [((2, q), factoring(2, q)) for q in X.dom if q != L2_ROOT]
        return all(node_otype(X, a) == node_otype(T, b) for a, b in pairs)
    if isinstance(factoring, Level3Factoring):
        R, Y = factoring.source, factoring.target
        if not factor_check_l3(factoring):
            return False
        return all(node_otype(R, r) == node_otype(Y, factoring(r)) for r in R.dom)
    if source is None or target is None:
        raise TreeValidationError("a level-1 node map needs its source and target trees")
    if set(factoring) != set(source.nodes) or any(v not in target for v in factoring.values()):
        return False
    images = [factoring[s] for s in source.ordered]
    if any(bk_key(a) >= bk_key(b) for a, b in zip(images, images[1:])):
        return False
    return all(node_otype(source, s) == node_otype(target, factoring[s]) for s in source.ordered)


@dataclass(frozen=True)
class Amalgam:
    """A merged tree, the two factorings into it and the merged labels."""

    tree: Tree
    first: Any
    second: Any
    labels: dict


def _relabel(paths: set) -> dict[tuple, Node]:
    """Regular level-1 nodes for a prefix-closed set of label paths; siblings go by label."""
    kids: dict[tuple, set] = {}
    for p in paths:
        for i in range(1, len(p) + 1):
            kids.setdefault(p[: i - 1], set()).add(p[:i])
    out: dict[tuple, Node] = {}
    stack = [((), ROOT)]
    while stack:
        p, node = stack.pop()
        for i, c in enumerate(sorted(kids.get(p, ()), key=lambda c: c[-1])):
            out[c] = node + (i,)
            stack.append((c, out[c]))
    return out


def _path1(x: Node, label: Any) -> tuple:
    return tuple(label(x[:i]) for i in range(1, len(x) + 1))


def _amalgamate1(first: tuple, second: tuple) -> Amalgam:
    (S, a), (S2, b) = first, second
    pa = {s: _path1(s, a.__getitem__) for s in S.nodes}
    pb = {s: _path1(s, b.__getitem__) for s in S2.nodes}
    new = _relabel(set(pa.values()) | set(pb.values()))
    tree = Level1Tree.of(*new.values())
    labels = {new[p]: p[-1] for p in new}
    return Amalgam(tree, {s: new[p] for s, p in pa.items()}, {s: new[p] for s, p in pb.items()}, labels)


def _path2(q: tuple, label: Any) -> tuple:
    """Per level, the label path of the child component inside its label tree."""
    return tuple(tuple(label(q[:j] + (q[j][:i],)) for i in range(1, len(q[j]) + 1)) for j in range(len(q)))


def _rebuild_nodes(keys: dict) -> dict[tuple, tuple]:
    """Merged nodes for prefix-closed keys whose components are label paths."""
    new: dict[tuple, tuple] = {(): L2_ROOT}
    for length in range(1, max((len(k) for k in keys), default=0) + 1):
        by_parent: dict[tuple, set] = {}
        for k in keys:
            if len(k) == length:
                by_parent.setdefault(k[:-1], set()).add(k[-1])
        for parent, comps in by_parent.items():
            labels = _relabel(comps)
            for c in comps:
                new[parent + (c,)] = new[parent] + (labels[c],)
    return new


def _amalgamate2(first: tuple, second: tuple) -> Amalgam:
    (X, a), (X2, b) = first, second
    ones = _amalgamate1(
        (X.t1, {x: a[(1, x)] for x in X.t1.nodes}),
        (X2.t1, {x: b[(1, x)] for x in X2.t1.nodes}),
    )
    ka = {q: _path2(q, lambda n: a[(2, n)]) for q in X.dom}
    kb = {q: _path2(q, lambda n: b[(2, n)]) for q in X2.dom}
    new = _rebuild_nodes({**{k: None for k in ka.values()}, **{k: None for k in kb.values()}})
    entries: dict[tuple, Any] = {}
    for tree, keys in ((X, ka), (X2, kb)):
        for q, k in keys.items():
            e = tree.entry(q)
            if entries.setdefault(new[k], e) != e:
                raise AmalgamationError(f"{format_l2(new[k])} would carry two entries")
    merged = Level2Tree(ones.tree, tuple(entries.items()))
    labels = {(1, x): v for x, v in ones.labels.items()}
    labels[(2, L2_ROOT)] = max(a[(2, L2_ROOT)], b[(2, L2_ROOT)])
    for tree, keys, lab in ((X, ka, a), (X2, kb, b)):
        labels.update({(2, new[k]): lab[(2, q)] for q, k in keys.items() if q != L2_ROOT})
    pi = Level2Factoring(X, merged, ones.first, {q: new[k] for q, k in ka.items()})
    pi2 = Level2Factoring(X2, merged, ones.second, {q: new[k] for q, k in kb.items()})
    if not (factor_check_l2(pi) and factor_check_l2(pi2)):
        raise AmalgamationError("the labels order the merged nodes against one of the trees")
    return Amalgam(merged, pi, pi2, labels)


def _below(R: Level3Tree, top: L3Node) -> dict:
    return {r[1:]: R.entry(r) for r in R.dom if r[:1] == top}


def _amalgamate3(first: tuple, second: tuple) -> Amalgam:
    (R, a), (R2, b) = first, second
    ka = {r: _path1(r[0], lambda x: a[(x,)]) for r in _tops(R)}
    kb = {r: _path1(r[0], lambda x: b[(x,)]) for r in _tops(R2)}
    new = _relabel(set(ka.values()) | set(kb.values()))
    table: dict[L3Node, Any] = {}
    for tree, keys in ((R, ka), (R2, kb)):
        for r, k in keys.items():
            top = (new[k],)
            below = _below(tree, r)
            seen = {s: e for s, e in table.items() if s[:1] == top}
            if seen and seen != {top + rel: e for rel, e in below.items()}:
                raise AmalgamationError(f"{format_l2(top)} would carry two different subtrees")
            table.update({top + rel: e for rel, e in below.items()})
    merged = Level3Tree(tuple(table.items()))
    rho = Level3Factoring(R, merged, {r: (new[ka[r[:1]]],) + r[1:] for r in R.dom})
    rho2 = Level3Factoring(R2, merged, {r: (new[kb[r[:1]]],) + r[1:] for r in R2.dom})
    labels = {(new[k],): k[-1] for k in new.keys()}
    if not (factor_check_l3(rho) and factor_check_l3(rho2)):
        raise AmalgamationError("the labels order the merged nodes against one of the trees")
    return Amalgam(merged, rho, rho2, labels)


def amalgamate(level: int, first: tuple[Tree, Mapping], second: tuple[Tree, Mapping]) -> Amalgam:
    """Merge two labelled trees of the same level by label.

    Labels are keyed the way ``respects_check`` reads them. Nodes with equal
    label paths are identified, the domain of the result is the union of the
    two images, and the merged labels must still respect the merged tree.

    Raises:
        AmalgamationError: If an input does not respect its labels, or the labels clash
    """
    merge = {1: _amalgamate1, 2: _amalgamate2, 3: _amalgamate3}.get(level)
    if merge is None:
        raise TreeValidationError(f"level must be 1, 2 or 3, got {level}")
    for tree, labels in (first, second):
        if not respects_check(tree, labels):
            raise AmalgamationError(f"the labels do not respect {tree}")
    try:
        out = merge(first, second)
    except KeyError as e:
        raise AmalgamationError(f"missing label for {e}") from e
    except TreeValidationError as e:
        raise AmalgamationError(f"no tree holds both label sets: {e}") from e
    if not respects_check(out.tree, out.labels):
        raise AmalgamationError("the merged labels do not respect the merged tree")
    logger.debug(f"Amalgamated {len(first[0])} and {len(second[0])} nodes into {len(out.tree)}")
    return out
