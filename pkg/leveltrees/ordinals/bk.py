"""Brouwer-Kleene comparison of finite sequences.

A sequence is BK-below another when it properly extends it, or when the first
differing entry is smaller. Entries are compared by ``atom_key``: integers
(with -1 the least entry), nested sequences (recursively by BK), objects that
expose ``sort_key()``, and ordinals.
"""

from __future__ import annotations

from typing import Any, Iterable, Sequence

from leveltrees.ordinals.cnf import CnfOrdinal, Ordering
from leveltrees.ordinals.uterm import UTerm


class BkDomainError(TypeError):
    """Raised when an entry has no place in the BK atom order."""
    pass


def atom_key(x: Any) -> tuple:
    if isinstance(x, bool):
        raise BkDomainError(f"booleans are not BK atoms: {x!r}")
    if isinstance(x, int):
        return (0, x)
    if isinstance(x, tuple):
        return (1, bk_key(x))
    if hasattr(x, "sort_key"):
        if isinstance(x, UTerm):
            return (3, x.sort_key())
        return (2, x.sort_key())
    if isinstance(x, CnfOrdinal):
        return (3, x.terms)
    raise BkDomainError(f"{x!r} of type {type(x).__name__} is not a BK atom")


def bk_key(s: Sequence[Any]) -> tuple:
    """Sort key realizing <_BK: a proper extension sorts before its prefix."""
    return tuple((0, atom_key(x)) for x in s) + ((1,),)


def bk_cmp(s: Sequence[Any], t: Sequence[Any]) -> Ordering:
    try:
        return Ordering.of(bk_key(s), bk_key(t))
    except BkDomainError:
        raise
    except TypeError as e:
        raise BkDomainError(f"cannot compare {s!r} with {t!r}: {e}") from e


def bk_sorted(items: Iterable[Sequence[Any]], reverse: bool = False) -> list:
    return sorted(items, key=bk_key, reverse=reverse)
