"""Canonical JSON for level-1, level <=2 and level-3 trees."""

import json
import logging
from pathlib import Path
from typing import Any, Union

from pydantic import ValidationError

from leveltrees.models import (
    DeltaJson,
    Level1Json,
    Level2EntryJson,
    Level2Json,
    Level3EntryJson,
    Level3Json,
    NodeJson,
)
from leveltrees.trees.level1 import MINUS_ONE, Level1Tree, NodeOrMinus
from leveltrees.trees.level2 import L2_ROOT, ROOT_ENTRY, Level2Tree
from leveltrees.trees.level3 import Level3Tree
from leveltrees.trees.towers import ZERO_DELTA, Delta

logger = logging.getLogger(__name__)

Tree = Union[Level1Tree, Level2Tree, Level3Tree]


class ParseError(ValueError):
    """Custom exception for malformed tree JSON."""
    pass


def _node(x: NodeJson | None) -> NodeOrMinus:
    return MINUS_ONE if x is None else tuple(x)


def _wire(x: NodeOrMinus) -> NodeJson | None:
    return None if x == MINUS_ONE else list(x)


class TreeCodec:
    """Converts between trees and their canonical JSON."""

    # -----------------------------
    # WIRE MODELS -> TREES
    # -----------------------------

    def level1_from_wire(self, model: Level1Json) -> Level1Tree:
        return Level1Tree.of(*model.root)

    def level2_from_wire(self, model: Level2Json) -> Level2Tree:
        t2 = {}
        for e in model.t2:
            q = tuple(tuple(a) for a in e.q)
            if q == L2_ROOT:
                if Level1Tree.of(*e.tree) != ROOT_ENTRY.tree or _node(e.node) != ROOT_ENTRY.node:
                    raise ParseError(f"the root entry must be ({{}}, (0)), got ({e.tree}, {e.node})")
                continue
            t2[q] = (e.tree, _node(e.node))
        return Level2Tree.build(model.t1, t2)

    def delta_from_wire(self, model: DeltaJson) -> Delta:
        if model.d == 0:
            return ZERO_DELTA
        if model.d == 1:
            return Delta(1, tuple(model.q))
        return Delta(2, tuple(tuple(a) for a in model.q), Level1Tree.of(*model.P))

    def level3_from_wire(self, model: Level3Json) -> Level3Tree:
        table = {}
        for e in model.entries:
            r = tuple(tuple(a) for a in e.r)
            table[r] = (self.level2_from_wire(e.tree), self.delta_from_wire(e.delta))
        return Level3Tree.build(table)

    # -----------------------------
    # TREES -> WIRE MODELS
    # -----------------------------

    def to_wire(self, tree: Tree) -> Union[Level1Json, Level2Json, Level3Json]:
        if isinstance(tree, Level1Tree):
            return Level1Json([list(x) for x in tree.ordered])
        if isinstance(tree, Level2Tree):
            return self._level2_to_wire(tree)
        return Level3Json(
            entries=[
                Level3EntryJson(
                    r=[list(a) for a in r],
                    tree=self._level2_to_wire(e.tree),
                    delta=self._delta_to_wire(e.delta),
                )
                for r, e in tree.entries
            ]
        )

    def _level2_to_wire(self, Q: Level2Tree) -> Level2Json:
        return Level2Json(
            t1=[list(x) for x in Q.t1.ordered],
            t2=[
                Level2EntryJson(q=[list(a) for a in q], tree=[list(x) for x in e.tree.ordered], node=_wire(e.node))
                for q, e in Q.entries
                if q != L2_ROOT
            ],
        )

    def _delta_to_wire(self, delta: Delta) -> DeltaJson:
        if delta.degree == 0:
            return DeltaJson(d=0)
        if delta.degree == 1:
            return DeltaJson(d=1, q=list(delta.q))
        return DeltaJson(d=2, q=[list(a) for a in delta.q], P=[list(x) for x in delta.tree.ordered])

    # -----------------------------
    # TEXT
    # -----------------------------

    def loads(self, text: str) -> Tree:
        """
        Parse a tree from canonical JSON; the shape decides the level.

        A list is a level-1 tree, an object with ``entries`` a level-3 tree and
        any other object a level <=2 tree.

        Raises:
            ParseError: If the text is not JSON of one of the three shapes
        """
        try:
            raw: Any = json.loads(text)
            if isinstance(raw, list):
                return self.level1_from_wire(Level1Json.model_validate(raw))
            if isinstance(raw, dict) and "entries" in raw:
                return self.level3_from_wire(Level3Json.model_validate(raw))
            if isinstance(raw, dict):
                return self.level2_from_wire(Level2Json.model_validate(raw))
            raise ParseError(f"expected a JSON list or object, got {type(raw).__name__}")
        except ParseError:
            raise
        except (json.JSONDecodeError, ValidationError) as e:
            raise ParseError(f"malformed tree JSON: {e}") from e
        except Exception as e:
            logger.error(f"Unexpected error decoding tree: {e}")
            raise ParseError(f"cannot build a tree from the JSON: {e}") from e

    def dumps(self, tree: Tree) -> str:
        return self.to_wire(tree).model_dump_json(indent=2)

    def load(self, path: Union[str, Path]) -> Tree:
        """
        Read a tree from a JSON file.

        Raises:
            ParseError: If the file cannot be read or parsed
        """
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as e:
            raise ParseError(f"cannot read {path}: {e}") from e
        logger.debug(f"Loaded {len(text)} bytes from {path}")
        return self.loads(text)


codec = TreeCodec()
