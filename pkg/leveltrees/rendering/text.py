"""Listing text of tensor products, factorings and associativity maps.

Every listing walks its tree in <_BK descending order, so a node comes before
its extensions and larger siblings come first; degree-2 nodes are listed
before degree-1 ones. Descriptions are shown either with the g/h expression
grammar or as their nested corners <<.>>.
"""

import logging
from typing import Callable, Iterable, Mapping

from leveltrees.descriptions.iota import iota_tqu, iota_ytq
from leveltrees.descriptions.qw import QWTensor, render_qw
from leveltrees.descriptions.tqw import TQTensor, TQWDesc, render_nested, render_tqw, tensor_tq
from leveltrees.descriptions.ytq import YTQDesc, YTTensor, tensor_yt
from leveltrees.ordinals.bk import bk_key
from leveltrees.trees.level1 import MINUS_ONE, Level1Tree, Node, format_node
from leveltrees.trees.level2 import L2_ROOT, Level2Factoring, Level2Tree, format_l2
from leveltrees.trees.level3 import Level3Factoring, Level3Tree
from leveltrees.trees.towers import Delta

logger = logging.getLogger(__name__)


def _descending(nodes: Iterable) -> list:
    return sorted(nodes, key=bk_key, reverse=True)


def format_dnode(d: int, x: tuple) -> str:
    return f"({d}, {format_l2(x) if d == 2 else format_node(x)})"


def format_delta(delta: Delta) -> str:
    """U_node text: (0, -1), (1, (0, 0)) or (2, ((0), (0)))."""
    if delta.degree == 0:
        return "(0, -1)"
    return format_dnode(delta.degree, delta.q)


# -----------------------------
# FACTORINGS
# -----------------------------


def render_psi_l1(psi: Mapping[Node, Node], S: Level1Tree) -> str:
    return "\n".join(f"psi({format_node(s)}) = {format_node(psi[s])}" for s in _descending(S.nodes)) + "\n"


def render_psi_l2(psi: Level2Factoring) -> str:
    X = psi.source
    lines = [f"psi{format_dnode(2, q)} = {format_dnode(*psi(2, q))}" for q in _descending(X.dom) if q != L2_ROOT]
    lines += [f"psi{format_dnode(1, x)} = {format_dnode(*psi(1, x))}" for x in _descending(X.t1.nodes)]
    return "\n".join(lines) + "\n"


def render_psi_l3(rho: Level3Factoring) -> str:
    return "\n".join(f"psi({format_l2(r)}) = {format_l2(rho(r))}" for r in _descending(rho.source.dom)) + "\n"


# -----------------------------
# LEVEL 1 AND LEVEL <=2 TENSORS
# -----------------------------


def render_qw_listing(U: QWTensor) -> str:
    """theta((i)) = <expression> for every node of Q (x) W."""
    return "\n".join(f"theta({format_node(s)}) = {render_qw(U.tau(s))}" for s in _descending(U.tree.nodes)) + "\n"


def render_tq_listing(U: TQTensor, name: str = "U") -> str:
    """The root entry, the degree-2 nodes with their node components, then the degree-1 nodes."""
    X = U.tree
    root = X.entry(L2_ROOT)
    lines = [f"2{name}(()) = ({root.tree}, {format_node(root.node)})", render_tqw(U(2, L2_ROOT))]
    for x in _descending(X.dom):
        if x == L2_ROOT:
            continue
        lines += [f"2{name}_node({format_l2(x)})= {format_node(X.node_at(x))}", render_tqw(U(2, x))]
    for x in _descending(X.t1.nodes):
        lines += [f"1{name} has the node {format_node(x)}", render_tqw(U(1, x))]
    return "\n".join(lines) + "\n"


def _nested_l2_lines(X: Level2Tree, name: str, columns: Mapping[str, Callable[[int, tuple], str]]) -> list[str]:
    """2X_node / 1X contains blocks, each followed by one <<column(node)>> line per column."""
    lines = []
    for x in _descending(X.dom):
        if x == L2_ROOT:
            continue
        lines.append(f"2{name}_node({format_l2(x)})= {format_node(X.node_at(x))}")
        lines += [f"<<{col}{format_l2(x)}>>= {show(2, x)}" for col, show in columns.items()]
    for x in _descending(X.t1.nodes):
        lines.append(f"1{name} contains {format_node(x)}")
        lines += [f"<<{col}{format_node(x)}>>= {show(1, x)}" for col, show in columns.items()]
    return lines


def render_nested_tq(U: TQTensor, name: str = "X") -> str:
    return "\n".join(_nested_l2_lines(U.tree, name, {f"pi_{name}": lambda d, x: render_nested(U(d, x))})) + "\n"


def render_iota_tqu(T: Level2Tree, Q: Level2Tree, U: Level2Tree) -> str:
    """X = T (x) Q, M = Q (x) U and N = X (x) U, with psi and iota_{T,Q,U} o psi on N."""
    X = tensor_tq(T, Q)
    M = tensor_tq(Q, U)
    N = tensor_tq(X.tree, U)
    iota = iota_tqu(T, Q, U)
    lines = _nested_l2_lines(X.tree, "X", {"pi_X": lambda d, x: render_nested(X(d, x))})
    lines += _nested_l2_lines(M.tree, "M", {"pi_M": lambda d, x: render_nested(M(d, x))})
    lines += _nested_l2_lines(
        N.tree,
        "N",
        {
            "psi": lambda d, x: render_nested(N(d, x)),
            "psi'": lambda d, x: render_nested(iota(N(d, x))),
        },
    )
    logger.debug(f"Rendered iota_(T,Q,U) over {len(iota)} nodes")
    return "\n".join(lines) + "\n"


# -----------------------------
# LEVEL 3
# -----------------------------


def _value_h(C: TQWDesc) -> str:
    text = "h" + render_tqw(C)
    if C.degree == 2 and C.W.nodes:
        return f"[a -> {text}]_mu"
    return text


def render_ytq(B: YTQDesc, nested: bool = False) -> str:
    """( y(0), value, y(1), ..., -1 ): labels interleaved with the values of B.

    ``nested`` shows every value as its <<corner>>, otherwise with the g/h grammar.
    """
    if B.is_constant:
        return "( )"
    show = render_nested if nested else _value_h
    parts = []
    for a in B.corner:
        if a == MINUS_ONE:
            parts.append("-1")
        elif isinstance(a, TQWDesc):
            parts.append(show(a))
        else:
            parts.append(format_node(a))
    return "( " + ", ".join(parts) + " )"


def _completion_text(R: Level3Tree, u: tuple, name: str) -> str:
    up = u[:-1]
    delta = R.delta_at(up)
    if delta.degree == 1:
        return f"the unique completion of {name}({format_l2(up)})"
    q = delta.q
    node = R.tree_at(u).node_at(q)
    return (
        f"the completion of {name}({format_l2(up)}) that sends (2, {format_l2(q)}) to the completion of "
        f"{name}_tree({format_l2(up)})(2, {format_l2(q[:-1])}) whose node component is {format_node(node)}"
    )


def _l3_lines(R: Level3Tree, name: str, values: Callable[[tuple], list[str]]) -> list[str]:
    lines = []
    for u in _descending(R.dom):
        if len(u) == 1:
            lines.append(f"{name}({format_l2(u)}) has degree {R.delta_at(u).degree}")
        else:
            lines.append(f"{name}_tree({format_l2(u)})= {_completion_text(R, u, name)}")
            lines.append(f"{name}_node{format_l2(u)}= {format_delta(R.delta_at(u))}")
        lines += values(u)
    return lines


def render_yt_listing(U: YTTensor, name: str = "U") -> str:
    """Three-line blocks: the tree as a completion of the parent, the new node, the expression."""
    return "\n".join(_l3_lines(U.tree, name, lambda u: [render_ytq(U(u))])) + "\n"


def render_iota_ytq(Y: Level3Tree, T: Level2Tree, Q: Level2Tree) -> str:
    """R = Y (x) T, M = T (x) Q and N = R (x) Q, with psi and iota_{Y,T,Q} o psi on N."""
    R = tensor_yt(Y, T)
    M = tensor_tq(T, Q)
    N = tensor_yt(R.tree, Q)
    iota = iota_ytq(Y, T, Q)
    lines = _l3_lines(R.tree, "R", lambda u: [f"<<rho_R{format_l2(u)}>>= {render_ytq(R(u), nested=True)}"])
    lines += _nested_l2_lines(M.tree, "M", {"pi_M": lambda d, x: render_nested(M(d, x))})
    lines += _l3_lines(
        N.tree,
        "N",
        lambda u: [
            f"<<psi{format_l2(u)}>>= {render_ytq(N(u), nested=True)}",
            f"<<psi'{format_l2(u)}>>= {render_ytq(iota(N(u)), nested=True)}",
        ],
    )
    logger.debug(f"Rendered iota_(Y,T,Q) over {len(iota)} nodes")
    return "\n".join(lines) + "\n"
