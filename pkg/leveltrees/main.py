import sys
import json
import logging
import argparse
from pathlib import Path
from typing import Any, Optional, Sequence

from leveltrees.config import get_settings
from leveltrees.models import ExitCode, OutputFormat, Verb
from leveltrees.parsing.codec import ParseError, Tree, codec
from leveltrees.storage.golden import GOLDEN_SOURCES, GoldenStore
from leveltrees.analysis.otype import node_otype
from leveltrees.analysis.signature import analyze1, analyze2
from leveltrees.compare.minimal import (
    AmalgamationError,
    SearchCapExceeded,
    minimal_factor_l1,
    minimal_factor_l2,
    minimal_factor_l3,
)
from leveltrees.descriptions.iota import iota_tqu, iota_ytq
from leveltrees.descriptions.qdesc import DescriptionError, desc_q
from leveltrees.descriptions.qw import FactoringError, enum_desc_qw, render_qw, tensor_qw
from leveltrees.descriptions.tqw import tensor_tq
from leveltrees.descriptions.ytq import desc_r, tensor_yt
from leveltrees.ordinals.cnf import OrdinalDomainError
from leveltrees.ordinals.uterm import UTerm
from leveltrees.rendering.text import (
    format_dnode,
    render_iota_tqu,
    render_iota_ytq,
    render_psi_l1,
    render_psi_l2,
    render_psi_l3,
    render_qw_listing,
    render_tq_listing,
    render_yt_listing,
)
from leveltrees.trees.fixtures import FIXTURE_NAMES, FixtureError, fixture, tau21
from leveltrees.trees.level1 import Level1Tree, TreeValidationError, format_node, validate_level1
from leveltrees.trees.level2 import Level2Tree, format_l2, validate_level2
from leveltrees.trees.level3 import Level3Tree, shift_check, validate_level3

logger = logging.getLogger(__name__)

# Library failures that end a command with COMPUTATION_FAILED.
_COMPUTATION_ERRORS = (
    DescriptionError,
    FactoringError,
    SearchCapExceeded,
    AmalgamationError,
    TreeValidationError,
    FixtureError,
    OrdinalDomainError,
)


def load_tree(source: str) -> Tree:
    """A JSON file, ``-`` for standard input, or the name of a built-in fixture."""
    if source == "-":
        return codec.loads(sys.stdin.read())
    if source in FIXTURE_NAMES and not Path(source).exists():
        return fixture(source)
    return codec.load(source)


def _expect(tree: Tree, kind: type, role: str) -> Any:
    if not isinstance(tree, kind):
        raise ParseError(f"{role} must be a {kind.__name__}, got a {type(tree).__name__}")
    return tree


def _json_node(text: Optional[str]) -> Any:
    if text is None:
        return None
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"malformed node {text!r}: {e}") from e
    if raw and isinstance(raw[0], list):
        return tuple(tuple(a) for a in raw)
    return tuple(raw)


def _emit(payload: Any, listing: str, fmt: OutputFormat) -> None:
    if fmt == OutputFormat.JSON:
        print(json.dumps(payload, indent=2))
    else:
        sys.stdout.write(listing if listing.endswith("\n") else listing + "\n")


# -----------------------------
# VERBS
# -----------------------------


def cmd_validate(args: argparse.Namespace, fmt: OutputFormat) -> ExitCode:
    tree = load_tree(args.tree)
    check = {Level1Tree: validate_level1, Level2Tree: validate_level2, Level3Tree: validate_level3}[type(tree)]
    violations = check(tree, regular=not args.irregular)
    _emit([v.model_dump() for v in violations], "\n".join(str(v) for v in violations) or "ok", fmt)
    return ExitCode.VIOLATIONS if violations else ExitCode.OK


def cmd_desc(args: argparse.Namespace, fmt: OutputFormat) -> ExitCode:
    tree = load_tree(args.tree)
    if isinstance(tree, Level3Tree):
        items = [str(y) for y in desc_r(tree, extended=args.extended)]
    elif args.W is not None:
        W = _expect(load_tree(args.W), Level1Tree, "W")
        items = [render_qw(d) for d in enum_desc_qw(_expect(tree, Level2Tree, "Q"), W)]
    else:
        items = [str(x) for x in desc_q(_expect(tree, Level2Tree, "Q"))]
    _emit(items, "\n".join(items), fmt)
    return ExitCode.OK


def cmd_tensor(args: argparse.Namespace, fmt: OutputFormat) -> ExitCode:
    left, right = load_tree(args.left), load_tree(args.right)
    cap = args.max_length or get_settings().tower_cap
    if args.level == "21":
        U = tensor_qw(_expect(left, Level2Tree, "Q"), _expect(right, Level1Tree, "W"))
        _emit(json.loads(codec.dumps(U.tree)), render_qw_listing(U), fmt)
    elif args.level == "22":
        U = tensor_tq(_expect(left, Level2Tree, "T"), _expect(right, Level2Tree, "Q"), max_length=cap)
        _emit(json.loads(codec.dumps(U.tree)), render_tq_listing(U), fmt)
    else:
        U = tensor_yt(_expect(left, Level3Tree, "Y"), _expect(right, Level2Tree, "T"), max_length=cap)
        _emit(json.loads(codec.dumps(U.tree)), render_yt_listing(U), fmt)
    logger.info(f"Tensor product at level {args.level} has {len(U.tree)} nodes")
    return ExitCode.OK


def cmd_otype(args: argparse.Namespace, fmt: OutputFormat) -> ExitCode:
    tree = load_tree(args.tree)
    node = _json_node(args.node)
    if isinstance(tree, Level2Tree) and node is not None:
        node = (args.degree, node)
    value = str(node_otype(tree, node))
    _emit({"otype": value}, value, fmt)
    return ExitCode.OK


def cmd_analyze(args: argparse.Namespace, fmt: OutputFormat) -> ExitCode:
    u = UTerm.parse(args.ordinal)
    result = analyze1(u) if args.level == 1 else analyze2(u)
    payload = {
        "signature": list(result.signature),
        "approximation": [str(a) for a in result.approximation],
        "tower": str(result.tower),
        "continuity": result.continuity.value,
    }
    listing = "\n".join(f"{k}: {v}" for k, v in payload.items())
    _emit(payload, listing, fmt)
    return ExitCode.OK


def cmd_factor(args: argparse.Namespace, fmt: OutputFormat) -> ExitCode:
    source, target = load_tree(args.source), load_tree(args.target)
    if isinstance(source, Level1Tree):
        Q = _expect(target, Level2Tree, "Q")
        W = _expect(load_tree(args.W), Level1Tree, "W") if args.W else None
        if W is None:
            raise ParseError("a level-1 factoring needs --W")
        psi = minimal_factor_l1(source, Q, W, tau21() if args.tau21 else None)
        payload = {format_node(s): format_node(v) for s, v in psi.items()}
        _emit(payload, render_psi_l1(psi, source), fmt)
    elif isinstance(source, Level2Tree):
        found = minimal_factor_l2(source, _expect(target, Level2Tree, "T"), cap=args.cap)
        payload = {
            "Q": json.loads(codec.dumps(found.Q)),
            "psi": {format_dnode(d, x): format_dnode(*found.psi(d, x)) for d, x in found.pi},
        }
        _emit(payload, render_psi_l2(found.psi), fmt)
    else:
        found = minimal_factor_l3(source, _expect(target, Level3Tree, "Y"), cap=args.cap)
        payload = {
            "T": json.loads(codec.dumps(found.T)),
            "rho": {format_l2(r): format_l2(v) for r, v in found.rho.table.items()},
            "B": None if found.top is None else format_l2(found.top),
        }
        _emit(payload, render_psi_l3(found.rho), fmt)
    return ExitCode.OK


def cmd_iota(args: argparse.Namespace, fmt: OutputFormat) -> ExitCode:
    first, second, third = load_tree(args.first), load_tree(args.second), load_tree(args.third)
    if args.level == "222":
        T, Q, U = (_expect(t, Level2Tree, r) for t, r in ((first, "T"), (second, "Q"), (third, "U")))
        iota, render = iota_tqu(T, Q, U), lambda: render_iota_tqu(T, Q, U)
    else:
        Y = _expect(first, Level3Tree, "Y")
        T, Q = _expect(second, Level2Tree, "T"), _expect(third, Level2Tree, "Q")
        iota, render = iota_ytq(Y, T, Q), lambda: render_iota_ytq(Y, T, Q)
    payload = {"size": len(iota), "bijective": iota.is_bijective}
    _emit(payload, render() if fmt == OutputFormat.LISTING else "", fmt)
    return ExitCode.OK


def cmd_shift(args: argparse.Namespace, fmt: OutputFormat) -> ExitCode:
    R = _expect(load_tree(args.tree), Level3Tree, "R")
    s = tuple(_json_node(x) for x in args.s)
    s_prime = tuple(_json_node(x) for x in args.s_prime)
    ok = shift_check(R, s, s_prime)
    _emit({"shift": ok}, "yes" if ok else "no", fmt)
    return ExitCode.OK if ok else ExitCode.VIOLATIONS


def cmd_fixtures(args: argparse.Namespace, fmt: OutputFormat) -> ExitCode:
    store = GoldenStore(Path(args.dir) if args.dir else None)
    names = list(GOLDEN_SOURCES) if args.name == "all" else [args.name]
    report = {name: store.check(name) for name in names}
    payload = {name: None if d is None else str(d) for name, d in report.items()}
    listing = "\n".join(f"{name}: {'ok' if d is None else d}" for name, d in report.items())
    _emit(payload, listing, fmt)
    return ExitCode.VIOLATIONS if any(d is not None for d in report.values()) else ExitCode.OK


_HANDLERS = {
    Verb.VALIDATE: cmd_validate,
    Verb.DESC: cmd_desc,
    Verb.TENSOR: cmd_tensor,
    Verb.OTYPE: cmd_otype,
    Verb.ANALYZE: cmd_analyze,
    Verb.FACTOR: cmd_factor,
    Verb.IOTA: cmd_iota,
    Verb.SHIFT: cmd_shift,
    Verb.FIXTURES: cmd_fixtures,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="leveltrees", description="Descriptions, tensor products and order types of level <=3 trees")
    parser.add_argument("--log-level", default=None, help="overrides LTC_LOG_LEVEL")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "listing", "paper"], default="json", help="paper is an alias of listing")
    verbs = parser.add_subparsers(dest="verb", required=True)

    p = verbs.add_parser(Verb.VALIDATE.value, parents=[common], help="report the broken invariants of a tree")
    p.add_argument("tree")
    p.add_argument("--irregular", action="store_true", help="allow non-contiguous child indices")

    p = verbs.add_parser(Verb.DESC.value, parents=[common], help="list desc(Q), desc(Q, W) or desc(R)")
    p.add_argument("tree")
    p.add_argument("--W", default=None)
    p.add_argument("--extended", action="store_true")

    p = verbs.add_parser(Verb.TENSOR.value, parents=[common], help="Q (x) W, T (x) Q or Y (x) T")
    p.add_argument("--level", choices=["21", "22", "32"], required=True)
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.add_argument("--max-length", type=int, default=None)

    p = verbs.add_parser(Verb.OTYPE.value, parents=[common], help="[[node]] of a tree, the root by default")
    p.add_argument("tree")
    p.add_argument("--node", default=None, help="JSON node, e.g. [[0],[1]]")
    p.add_argument("--degree", type=int, choices=[1, 2], default=2)

    p = verbs.add_parser(Verb.ANALYZE.value, parents=[common], help="signature and induced tower of an ordinal")
    p.add_argument("ordinal", help="u-expression such as u2*w+w")
    p.add_argument("--level", type=int, choices=[1, 2], default=2)

    p = verbs.add_parser(Verb.FACTOR.value, parents=[common], help="minimal factoring of source into target (x) Q")
    p.add_argument("--minimal", action="store_true", help="accepted for readability; every factoring searched is minimal")
    p.add_argument("--source", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--W", default=None)
    p.add_argument("--tau21", action="store_true", help="use the built-in tau of S21")
    p.add_argument("--cap", type=int, default=None)

    p = verbs.add_parser(Verb.IOTA.value, parents=[common], help="the associativity map of a triple")
    p.add_argument("--level", choices=["222", "322"], required=True)
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("third")

    p = verbs.add_parser(Verb.SHIFT.value, parents=[common], help="is s' an R-shift of s")
    p.add_argument("tree")
    p.add_argument("--s", nargs="+", required=True)
    p.add_argument("--s-prime", nargs="+", required=True)

    p = verbs.add_parser(Verb.FIXTURES.value, parents=[common], help="diff golden listings against fresh output")
    p.add_argument("name", nargs="?", default="all")
    p.add_argument("--dir", default=None)
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse argv, dispatch one verb and map failures to exit codes."""
    parser = build_parser()
    args = parser.parse_args(argv)
    settings = get_settings()
    level = (args.log_level or settings.log_level).upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.WARNING),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    fmt = OutputFormat.LISTING if args.format == "paper" else OutputFormat(args.format)
    try:
        return int(_HANDLERS[Verb(args.verb)](args, fmt))
    except ParseError as e:
        logger.error(f"Parse error: {e}")
        print(f"error: {e}", file=sys.stderr)
        return int(ExitCode.PARSE_ERROR)
    except _COMPUTATION_ERRORS as e:
        logger.error(f"{type(e).__name__}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return int(ExitCode.COMPUTATION_FAILED)
    except Exception as e:
        logger.error(f"Unexpected error in {args.verb}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return int(ExitCode.VIOLATIONS)


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
