"""Golden listing storage and byte-exact comparison."""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional

from leveltrees.compare.minimal import minimal_factor_l1, minimal_factor_l2, minimal_factor_l3
from leveltrees.config import get_settings
from leveltrees.descriptions.qw import tensor_qw
from leveltrees.descriptions.tqw import tensor_tq
from leveltrees.descriptions.ytq import tensor_yt
from leveltrees.rendering.text import (
    render_iota_tqu,
    render_iota_ytq,
    render_psi_l1,
    render_psi_l2,
    render_psi_l3,
    render_qw_listing,
    render_tq_listing,
    render_yt_listing,
)
from leveltrees.trees.fixtures import FixtureError, fixture, tau21

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GoldenDiff:
    """The first line where a rendered listing leaves its golden file."""

    name: str
    line: int
    expected: Optional[str]
    actual: Optional[str]

    def __str__(self) -> str:
        return f"{self.name}:{self.line}: expected {self.expected!r}, got {self.actual!r}"


def first_divergence(name: str, expected: str, actual: str) -> Optional[GoldenDiff]:
    """None when the texts are byte-identical, otherwise the first differing line (1-based)."""
    if expected == actual:
        return None
    want, got = expected.splitlines(), actual.splitlines()
    for i in range(max(len(want), len(got))):
        a = want[i] if i < len(want) else None
        b = got[i] if i < len(got) else None
        if a != b:
            return GoldenDiff(name, i + 1, a, b)
    # only line endings differ
    return GoldenDiff(name, len(want), "<line ending>", "<line ending>")


# Golden name -> the computation whose listing it records.
GOLDEN_SOURCES: dict[str, Callable[[], str]] = {
    "qw_s21": lambda: render_qw_listing(tensor_qw(fixture("QS21"), fixture("W21"))),
    "psi_s21": lambda: render_psi_l1(
        minimal_factor_l1(fixture("S21"), fixture("QS21"), fixture("W21"), tau21()), fixture("S21")
    ),
    "tq_t22_q22": lambda: render_tq_listing(tensor_tq(fixture("T22"), fixture("Q22"))),
    "psi_x22_t22": lambda: render_psi_l2(minimal_factor_l2(fixture("X22"), fixture("T22")).psi),
    "yt_y23_t23": lambda: render_yt_listing(tensor_yt(fixture("Y23"), fixture("T23"))),
    "psi_r23_y23": lambda: render_psi_l3(minimal_factor_l3(fixture("R23"), fixture("Y23")).rho),
    "iota_tqu": lambda: render_iota_tqu(fixture("T44"), fixture("Q21"), fixture("Q21")),
    "iota_ytq": lambda: render_iota_ytq(fixture("R2"), fixture("Q21"), fixture("Q20")),
}


class GoldenStore:
    """
    Golden listings kept as <name>.txt files in the fixtures directory.
    """

    def __init__(self, root: Optional[Path] = None) -> None:
        self.root = Path(root) if root is not None else Path(get_settings().fixtures_dir)

    def path(self, name: str) -> Path:
        return self.root / f"{name}.txt"

    def names(self) -> list[str]:
        """Golden files present on disk, sorted."""
        return sorted(p.stem for p in self.root.glob("*.txt"))

    def read(self, name: str) -> str:
        """
        Read a golden listing.

        Raises:
            FixtureError: If the file is missing
        """
        try:
            return self.path(name).read_text(encoding="utf-8")
        except FileNotFoundError:
            raise FixtureError(f"No golden listing {name!r} in {self.root}") from None

    def render(self, name: str) -> str:
        """
        Recompute the listing a golden file records.

        Raises:
            FixtureError: If no computation is registered under the name
        """
        try:
            source = GOLDEN_SOURCES[name]
        except KeyError:
            raise FixtureError(f"Unknown golden {name!r}; known: {', '.join(GOLDEN_SOURCES)}") from None
        return source()

    def check(self, name: str) -> Optional[GoldenDiff]:
        """Render ``name`` and compare it with its golden file byte for byte."""
        diff = first_divergence(name, self.read(name), self.render(name))
        if diff is None:
            logger.info(f"Golden {name} matches")
        else:
            logger.info(f"Golden {name} differs: {diff}")
        return diff

    def check_all(self) -> dict[str, Optional[GoldenDiff]]:
        return {name: self.check(name) for name in GOLDEN_SOURCES}
