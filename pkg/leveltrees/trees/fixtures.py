"""Named trees of the guide examples and the level-3 anchors.

Every tree here is rebuilt from plain node data on each call to ``fixture``;
the results are immutable so callers may cache them freely.
"""

from __future__ import annotations

import logging
from functools import lru_cache
from typing import Callable, Union

from leveltrees.descriptions.qw import FactorSQW, enum_desc_qw
from leveltrees.trees.level1 import MINUS_ONE, Level1Tree
from leveltrees.trees.level2 import Level2Tree, Q0
from leveltrees.trees.level3 import Level3Tree
from leveltrees.trees.towers import ZERO_DELTA, Delta

logger = logging.getLogger(__name__)

Tree = Union[Level1Tree, Level2Tree, Level3Tree]


class FixtureError(KeyError):
    """Raised for unknown fixture names and missing golden files."""
    pass


def _q1() -> Level2Tree:
    return Level2Tree.build([(0,)], {})


def _q20() -> Level2Tree:
    return Level2Tree.build([], {((0,),): ([(0,)], MINUS_ONE)})


def _q21() -> Level2Tree:
    return Level2Tree.build([], {((0,),): ([(0,)], (0, 0))})


def _qstar() -> Level2Tree:
    return Level2Tree.build([(0,)], {((0,),): ([(0,)], MINUS_ONE)})


DELTA_1 = Delta(1, (0,))
DELTA_2 = Delta(2, ((0,),), Level1Tree.of((0,)))
DELTA_22 = Delta(2, ((0,), (0,)), Level1Tree.of((0,), (0, 0)))


def _r(delta: Delta) -> Level3Tree:
    return Level3Tree.build({((0,),): (Q0, delta)})


def _r23() -> Level3Tree:
    return Level3Tree.build(
        {
            ((0,),): (Q0, DELTA_2),
            ((0,), (1,)): (_q21(), DELTA_22),
            ((0,), (0,)): (_q20(), DELTA_1),
            ((0,), (0,), (0,)): (_qstar(), ZERO_DELTA),
        }
    )


def _y23() -> Level3Tree:
    return Level3Tree.build(
        {
            ((3,),): (Q0, ZERO_DELTA),
            ((2,),): (Q0, DELTA_1),
            ((1,),): (Q0, DELTA_2),
            ((1,), (0,)): (_q21(), DELTA_22),
            ((0,),): (Q0, ZERO_DELTA),
        }
    )


def _t23() -> Level2Tree:
    return Level2Tree.build(
        [],
        {
            ((0,),): ([(0,)], (0, 0)),
            ((0,), (0,)): ([(0,), (0, 0)], MINUS_ONE),
        },
    )


def _s21() -> Level1Tree:
    return Level1Tree.of((3,), (3, 0), (3, 0, 0), (2,), (1,), (1, 2), (1, 2, 0), (1, 1), (1, 0), (0,))


def _qs21() -> Level2Tree:
    return Level2Tree.build(
        [],
        {
            ((1,),): ([(0,)], (0, 0)),
            ((0,),): ([(0,)], (0, 0)),
            ((0,), (0,)): ([(0,), (0, 0)], MINUS_ONE),
        },
    )


def _x22() -> Level2Tree:
    return Level2Tree.build(
        [(0,), (1,)],
        {
            ((0,),): ([(0,)], (0, 0)),
            ((0,), (0,)): ([(0,), (0, 0)], (0, 0, 0)),
            ((0,), (1,)): ([(0,), (0, 0)], (0, 0, 0)),
        },
    )


def _t22() -> Level2Tree:
    return Level2Tree.build(
        [(0,)],
        {
            ((1,),): ([(0,)], (0, 0)),
            ((1,), (0,)): ([(0,), (0, 0)], (0, 1)),
            ((0,),): ([(0,)], MINUS_ONE),
        },
    )


def _q22() -> Level2Tree:
    return Level2Tree.build([(0,)], {((0,),): ([(0,)], (0, 0))})


def _t44() -> Level2Tree:
    # 1T = {(0)} and 2T = 2Q^20
    return Level2Tree.build([(0,)], {((0,),): ([(0,)], MINUS_ONE)})


_BUILDERS: dict[str, Callable[[], Tree]] = {
    "Q0": lambda: Q0,
    "Q1": _q1,
    "Q20": _q20,
    "Q21": _q21,
    "Qstar": _qstar,
    "R0": lambda: _r(ZERO_DELTA),
    "R1": lambda: _r(DELTA_1),
    "R2": lambda: _r(DELTA_2),
    "R23": _r23,
    "Y23": _y23,
    "T23": _t23,
    "S21": _s21,
    "QS21": _qs21,
    "W21": lambda: Level1Tree.of((0,), (1,), (2,)),
    "X22": _x22,
    "T22": _t22,
    "Q22": _q22,
    "W4": lambda: Level1Tree.of((0,), (1,), (2,), (3,)),
    "T44": _t44,
}

FIXTURE_NAMES: tuple[str, ...] = tuple(_BUILDERS)


@lru_cache(maxsize=None)
def fixture(name: str) -> Tree:
    """The named tree.

    Raises:
        FixtureError: If no fixture has that name
    """
    try:
        builder = _BUILDERS[name]
    except KeyError:
        raise FixtureError(f"Unknown fixture {name!r}; known: {', '.join(FIXTURE_NAMES)}") from None
    return builder()


def fixture_level(name: str) -> int:
    tree = fixture(name)
    if isinstance(tree, Level1Tree):
        return 1
    return 2 if isinstance(tree, Level2Tree) else 3


# tau of the level-1 guide example, as corners (sigma(p_0), q_0, sigma(p_1), q_1, ...).
TAU21_CORNERS: dict[tuple, tuple] = {
    (3,): ((2,), MINUS_ONE),
    (3, 0): ((1,), (1,)),
    (3, 0, 0): ((1,), (1,), (0,), MINUS_ONE),
    (2,): ((1,), (0,)),
    (1,): ((1,), (0,), (0,), (0,)),
    (1, 2): ((1,), (0,), (0,), MINUS_ONE),
    (1, 2, 0): ((1,), MINUS_ONE),
    (1, 1): ((0,), (1,)),
    (1, 0): ((0,), (0,)),
    (0,): ((0,), MINUS_ONE),
}


def tau21() -> FactorSQW:
    """The factoring tau of (S21, QS21, W21) from the level-1 guide example."""
    by_corner = {d.corner: d for d in enum_desc_qw(fixture("QS21"), fixture("W21"))}
    try:
        table = {s: by_corner[(2, body)] for s, body in TAU21_CORNERS.items()}
    except KeyError as e:
        raise FixtureError(f"tau21 names a corner outside desc(Q, W): {e}") from e
    return FactorSQW(fixture("S21"), table)
