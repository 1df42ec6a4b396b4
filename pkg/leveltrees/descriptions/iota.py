"""Associativity of the tensor product: iota_{T,Q,W}, iota_{T,Q,U} and iota_{Y,T,Q}.

Each map sends the descriptions of (A (x) B) (x) C to those of A (x) (B (x) C).
A left-hand description is unpacked through the representation of A (x) B,
its map is pushed along B (x) psi, and the two continuous clauses add the
value named by psi at the newest node: psi*_0 appends
(2, ((-1), {(0)}, ((0))), (0) -> psi(z_l)) at a new node of A, psi*_1 extends
the last extendable value (2, q, sigma) to
(2, q^(-1), sigma + {p_m -> psi(z_l)}).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Any, Callable, Mapping, Optional

from leveltrees.descriptions.qdesc import LEAST_CONTINUOUS, DescKind, DescriptionError, QDesc
from leveltrees.descriptions.qw import FactorSQW, QWDesc, QWTensor, enum_desc_qw, tensor_qw
from leveltrees.descriptions.tqw import (
    TQTensor,
    TQWDesc,
    tensor_map_left,
    tensor_map_right,
    tensor_tq,
)
from leveltrees.descriptions.ytq import (
    RDescGen,
    YTQDesc,
    YTTensor,
    factoring_into,
    moved_values,
    tensor_yt,
)
from leveltrees.trees.level1 import MINUS_ONE, Level1Tree, Node
from leveltrees.trees.level2 import Level2Tree
from leveltrees.trees.level3 import Level3Tree

logger = logging.getLogger(__name__)

__all__ = [
    "Associator",
    "iota_tqw",
    "iota_tqu",
    "iota_ytq",
    "tensor_map_left",
    "tensor_map_right",
]


@dataclass(frozen=True)
class Associator:
    """A bijection between two bracketings, kept as (left, right) pairs of descriptions."""

    pairs: tuple

    @cached_property
    def _forward(self) -> dict:
        return {a.sort_key(): b for a, b in self.pairs}

    @cached_property
    def _backward(self) -> dict:
        return {b.sort_key(): a for a, b in self.pairs}

    def __call__(self, left: Any) -> Any:
        try:
            return self._forward[left.sort_key()]
        except KeyError:
            raise DescriptionError(f"{left} is not in the domain of the associator") from None

    def inverse(self, right: Any) -> Any:
        try:
            return self._backward[right.sort_key()]
        except KeyError:
            raise DescriptionError(f"{right} is not in the range of the associator") from None

    def __len__(self) -> int:
        return len(self.pairs)

    @property
    def is_bijective(self) -> bool:
        return len(self._forward) == len(self._backward) == len(self.pairs)

    @property
    def range(self) -> list:
        return [b for _, b in self.pairs]


@lru_cache(maxsize=64)
def _tq(T: Level2Tree, Q: Level2Tree) -> TQTensor:
    return tensor_tq(T, Q)


@lru_cache(maxsize=64)
def _qw(Q: Level2Tree, W: Level1Tree) -> QWTensor:
    return tensor_qw(Q, W)


def _along(psi: Mapping[Node, Any], d: QWDesc) -> QWDesc:
    """(Q (x) psi)(d, q, sigma) = (d, q, psi o sigma)."""
    if d.degree == 1:
        return d
    return QWDesc(2, d.q, {p: psi[w] for p, w in d.sigma})


def _extendable(last: QWDesc) -> bool:
    return last.degree == 2 and last.q.kind == DescKind.DISCONTINUOUS and last.q.nodes[-1] != MINUS_ONE


def _star(t: QDesc, tau: FactorSQW, psi: Mapping[Node, Any], new: Optional[Any] = None) -> tuple[QDesc, dict[Node, QWDesc]]:
    """(t, (Q (x) psi) o tau), or its psi*_0 / psi*_1 version when ``new`` = psi(z_l) is given.

    A continuous t whose last value already ends in -1 has the psi*_1 extension
    applied to the nearest earlier value along s that can still be extended.

    Raises:
        DescriptionError: If the continuous clause meets a degree-0 t, or no value
            along s is a discontinuous degree-2 description of a degree-1 node
    """
    table = {s: _along(psi, d) for s, d in tau.values}
    if new is None:
        return t, table
    s_k = t.nodes[-1]
    if not t.is_continuous:
        if s_k == MINUS_ONE:
            raise DescriptionError(f"{t} has degree 0 and no continuous extension")
        t_plus = QDesc(t.q + (MINUS_ONE,), t.tree.completion(s_k), t.nodes, DescKind.CONTINUOUS)
        table[s_k] = QWDesc(2, LEAST_CONTINUOUS, {(0,): new})
        return t_plus, table
    target = next((s for s in reversed(t.nodes) if s in table and _extendable(tau(s))), None)
    if target is None:
        raise DescriptionError(f"the last value {tau(s_k)} of a continuous {t} cannot be extended")
    last = tau(target)
    q = last.q
    p_m = q.nodes[-1]
    q_plus = QDesc(q.q + (MINUS_ONE,), q.tree.completion(p_m), q.nodes, DescKind.CONTINUOUS)
    sigma = {p: psi[w] for p, w in last.sigma}
    sigma[p_m] = new
    table[target] = QWDesc(2, q_plus, sigma)
    return t, table


def _level1_image(D: QWDesc, XT: TQTensor, psi: Mapping[Node, Any], lookup: Callable[[QWDesc], Node]) -> QWDesc:
    """iota for a (X, W)-description D with X = T (x) Q; ``lookup`` names a (Q, W)-value's node in Q (x) W."""
    if D.degree == 1:
        t = XT(1, D.q).t
        if t.degree == 1:
            return QWDesc(1, t.q)
        return QWDesc(2, t.q, {p: lookup(QWDesc(1, q)) for p, q in t.sigma})
    x = D.q
    C = XT(2, x.node_q)
    new = psi[x.nodes[-1]] if x.is_continuous else None
    t, table = _star(C.t, C.tau, psi, new)
    return QWDesc(2, t, {s: lookup(v) for s, v in table.items()})


def iota_tqw(T: Level2Tree, Q: Level2Tree, W: Level1Tree) -> Associator:
    """iota_{T,Q,W}: (T (x) Q) (x) W onto T (x) (Q (x) W), over the non-constant descriptions."""
    XT = _tq(T, Q)
    QW = _qw(Q, W)
    pairs = []
    for D in enum_desc_qw(XT.tree, W, descending=False):
        if D.is_constant:
            continue
        pairs.append((D, _level1_image(D, XT, D.sigma_map, QW.node_of)))
    logger.debug(f"iota_(T,Q,W) pairs {len(pairs)} descriptions")
    return Associator(tuple(pairs))


@lru_cache(maxsize=64)
def _iota_tqw(T: Level2Tree, Q: Level2Tree, W: Level1Tree) -> Associator:
    return iota_tqw(T, Q, W)


def _image_tqu(B: TQWDesc, XT: TQTensor, Q: Level2Tree, U: Level2Tree) -> TQWDesc:
    MT = _tq(Q, U)
    if B.degree == 1:
        D = B.t
        psi = D.sigma_map if D.degree == 2 else {}
        return TQWDesc(1, _level1_image(D, XT, psi, lambda v: MT.node_of(TQWDesc(1, v))[1]))
    if B.is_constant:
        return B
    W = B.W
    S = _qw(U, W)
    back = _iota_tqw(Q, U, W)
    psi = {z: S.node_of(d) for z, d in B.tau.values}
    x = B.t
    C = XT(2, x.node_q)
    new = psi[x.nodes[-1]] if x.is_continuous else None
    t, table = _star(C.t, C.tau, psi, new)
    return TQWDesc(2, t, FactorSQW(t.tree, {s: back.inverse(v) for s, v in table.items()}))


def iota_tqu(T: Level2Tree, Q: Level2Tree, U: Level2Tree) -> Associator:
    """iota_{T,Q,U}: (T (x) Q) (x) U onto T (x) (Q (x) U), a level <=2 tree isomorphism.

    Degree-2 values pass through the inverse of iota_{Q,U,W} for the tree W of
    the description's tower.
    """
    XT = _tq(T, Q)
    N = _tq(XT.tree, U)
    pairs = [(B, _image_tqu(B, XT, Q, U)) for _, B in N.pi]
    logger.debug(f"iota_(T,Q,U) pairs {len(pairs)} descriptions")
    return Associator(tuple(pairs))


@lru_cache(maxsize=64)
def _iota_tqu(T: Level2Tree, Q: Level2Tree, U: Level2Tree) -> Associator:
    return iota_tqu(T, Q, U)


def _image_ytq(A: YTQDesc, RT: YTTensor, T: Level2Tree, Q: Level2Tree) -> YTQDesc:
    """(y, iota^-1_{T,Q,U} o (T (x) psi) o pi) and its psi*_0 / psi*_1 variants."""
    if A.is_constant:
        return A
    U = A.Q
    QU = _tq(Q, U)
    psi = factoring_into(A.X, A.table, QU)
    y, values = moved_values(RT.table, RDescGen(A.y, psi, QU.tree))
    back = _iota_tqu(T, Q, U)
    image = tuple((dx, back.inverse(values[dx])) for dx in y.dnodes)
    return YTQDesc(y, image, A.tower)


def iota_ytq(Y: Level3Tree, T: Level2Tree, Q: Level2Tree) -> Associator:
    """iota_{Y,T,Q}: (Y (x) T) (x) Q onto Y (x) (T (x) Q), a level-3 tree isomorphism."""
    RT = tensor_yt(Y, T)
    N = tensor_yt(RT.tree, Q)
    pairs = [(A, _image_ytq(A, RT, T, Q)) for _, A in N.rho]
    logger.debug(f"iota_(Y,T,Q) pairs {len(pairs)} descriptions")
    return Associator(tuple(pairs))
