"""Exact arithmetic for ordinals below omega^(omega^omega) in iterated Cantor normal form."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Iterable

logger = logging.getLogger(__name__)

# An exponent is an ordinal below omega^omega: ((power, coefficient), ...) with
# strictly descending powers and positive coefficients. () is the exponent 0.
Exponent = tuple[tuple[int, int], ...]


class OrdinalOverflowError(ArithmeticError):
    """Raised when a result would reach omega^(omega^omega)."""
    pass


class OrdinalDomainError(ValueError):
    """Raised for malformed normal forms and out-of-range arguments."""
    pass


class Ordering(str, Enum):
    """Outcome of a three-way comparison, this is."""

    LT = "lt"
    EQ = "eq"
    GT = "gt"

    @classmethod
    def of(cls, a, b) -> "Ordering":
        if a < b:
            return cls.LT
        if a == b:
            return cls.EQ
        return cls.GT


def _check_exponent(e: Exponent) -> None:
    last = None
    for pair in e:
        if len(pair) != 2:
            raise OrdinalDomainError(f"exponent term {pair!r} is not a (power, coefficient) pair")
        power, coeff = pair
        if power < 0 or coeff < 1:
            raise OrdinalDomainError(f"exponent term {pair!r} needs power >= 0 and coefficient >= 1")
        if last is not None and power >= last:
            raise OrdinalDomainError(f"exponent {e!r} is not strictly descending")
        last = power


def exponent_add(a: Exponent, b: Exponent) -> Exponent:
    """Ordinal sum of two exponents below omega^omega."""
    if not b:
        return a
    lead_power, lead_coeff = b[0]
    kept = [pair for pair in a if pair[0] > lead_power]
    same = [c for p, c in a if p == lead_power]
    head = (lead_power, lead_coeff + (same[0] if same else 0))
    return tuple(kept) + (head,) + b[1:]


@dataclass(frozen=True, order=True)
class CnfOrdinal:
    """An ordinal omega^e_0 + omega^e_1 + ... with weakly descending exponents.

    Tuple order on ``terms`` coincides with ordinal order, so the dataclass
    ordering is the ordinal ordering.
    """

    terms: tuple[Exponent, ...] = ()

    def __post_init__(self) -> None:
        terms = tuple(tuple(tuple(pair) for pair in e) for e in self.terms)
        object.__setattr__(self, "terms", terms)
        for e in terms:
            _check_exponent(e)
        for left, right in zip(terms, terms[1:]):
            if left < right:
                raise OrdinalDomainError(f"exponents {terms!r} are not weakly descending")

    @classmethod
    def finite(cls, n: int) -> "CnfOrdinal":
        if n < 0:
            raise OrdinalDomainError(f"finite ordinal must be >= 0, got {n}")
        return cls(((),) * n)

    @classmethod
    def from_exponents(cls, exponents: Iterable[Exponent]) -> "CnfOrdinal":
        """Build a normal form from exponents given in any order, summing them in that order."""
        result = cls()
        for e in exponents:
            result = cnf_add(result, omega_to(e))
        return result

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_successor(self) -> bool:
        return bool(self.terms) and self.terms[-1] == ()

    @property
    def is_limit(self) -> bool:
        return bool(self.terms) and self.terms[-1] != ()

    @property
    def leading(self) -> Exponent:
        if not self.terms:
            raise OrdinalDomainError("0 has no leading exponent")
        return self.terms[0]

    def grouped(self) -> list[tuple[Exponent, int]]:
        """Exponents with their multiplicities, in descending order."""
        groups: list[tuple[Exponent, int]] = []
        for e in self.terms:
            if groups and groups[-1][0] == e:
                groups[-1] = (e, groups[-1][1] + 1)
            else:
                groups.append((e, 1))
        return groups

    def __add__(self, other: "CnfOrdinal") -> "CnfOrdinal":
        return cnf_add(self, other)

    def __mul__(self, other: "CnfOrdinal") -> "CnfOrdinal":
        return cnf_mul(self, other)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, count in self.grouped():
            base = _render_power(e)
            if base == "1":
                parts.append(str(count))
            else:
                parts.append(base if count == 1 else f"{base}*{count}")
        return "+".join(parts)


def _render_exponent(e: Exponent) -> str:
    parts = []
    for power, coeff in e:
        if power == 0:
            parts.append(str(coeff))
            continue
        base = "w" if power == 1 else f"w^{power}"
        parts.append(base if coeff == 1 else f"{base}*{coeff}")
    return "+".join(parts)


def _render_power(e: Exponent) -> str:
    if e == ():
        return "1"
    if e == ((0, 1),):
        return "w"
    text = _render_exponent(e)
    if any(ch in text for ch in "+*^"):
        return f"w^({text})"
    return f"w^{text}"


ZERO = CnfOrdinal()
ONE = CnfOrdinal.finite(1)
OMEGA = CnfOrdinal((((0, 1),),))


def omega_to(e: Exponent) -> CnfOrdinal:
    """The ordinal omega^e for an exponent below omega^omega."""
    _check_exponent(e)
    return CnfOrdinal((e,))


def omega_power(exponent: CnfOrdinal) -> CnfOrdinal:
    """omega^exponent, defined while exponent < omega^omega.

    Raises:
        OrdinalOverflowError: If the exponent is omega^omega or larger
    """
    pairs: list[tuple[int, int]] = []
    for e, count in exponent.grouped():
        if e == ():
            pairs.append((0, count))
        elif len(e) == 1 and e[0][0] == 0:
            # omega^n with n finite contributes the power n
            pairs.append((e[0][1], count))
        else:
            raise OrdinalOverflowError(f"omega^({exponent}) is not below omega^(omega^omega)")
    return omega_to(tuple(pairs))


def cnf_cmp(a: CnfOrdinal, b: CnfOrdinal) -> Ordering:
    return Ordering.of(a.terms, b.terms)


def cnf_add(a: CnfOrdinal, b: CnfOrdinal) -> CnfOrdinal:
    """Ordinal sum a + b in normal form."""
    if not b.terms:
        return a
    lead = b.terms[0]
    kept = tuple(e for e in a.terms if e >= lead)
    return CnfOrdinal(kept + b.terms)


def cnf_mul(a: CnfOrdinal, b: CnfOrdinal) -> CnfOrdinal:
    """Ordinal product a * b in normal form, left-distributing over b's terms."""
    if not a.terms or not b.terms:
        return ZERO
    lead = a.terms[0]
    result = ZERO
    for e in b.terms:
        if e == ():
            result = cnf_add(result, a)
        else:
            result = cnf_add(result, omega_to(exponent_add(lead, e)))
    return result


def cnf_sum(values: Iterable[CnfOrdinal]) -> CnfOrdinal:
    result = ZERO
    for v in values:
        result = cnf_add(result, v)
    return result
