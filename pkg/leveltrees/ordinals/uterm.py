"""Images of the hat map: formal sums of products of uniform indiscernibles u_n."""

from __future__ import annotations

import re
from dataclasses import dataclass

from leveltrees.ordinals.cnf import (
    CnfOrdinal,
    Exponent,
    OrdinalDomainError,
    Ordering,
    cnf_add,
    cnf_mul,
    omega_to,
)

_FACTOR = re.compile(r"^(w1|w|u(\d+))$")


@dataclass(frozen=True, order=True)
class UTerm:
    """hat(preimage), stored as its preimage.

    Order, sums and products are computed on preimages. The product is the
    pullback product and is not ordinal multiplication of the u-expressions.
    """

    preimage: CnfOrdinal = CnfOrdinal()

    @classmethod
    def u(cls, n: int) -> "UTerm":
        """u_n for n >= 1 (u_1 = omega_1)."""
        if n < 1:
            raise OrdinalDomainError(f"u_n needs n >= 1, got {n}")
        return cls(omega_to(((n - 1, 1),)))

    @classmethod
    def omega(cls, coefficient: int = 1) -> "UTerm":
        return cls(CnfOrdinal.finite(coefficient))

    @classmethod
    def parse(cls, text: str) -> "UTerm":
        """Parse the textual form produced by ``str``.

        Raises:
            OrdinalDomainError: If the text is not a well-formed u-expression
        """
        source = text.strip().replace(" ", "")
        if source == "0":
            return cls()
        exponents: list[Exponent] = []
        for summand in source.split("+"):
            if not summand:
                raise OrdinalDomainError(f"empty summand in {text!r}")
            pieces = summand.split("*")
            repeat = 1
            if pieces[-1].isdigit():
                repeat = int(pieces.pop())
                if repeat < 1:
                    raise OrdinalDomainError(f"coefficient must be positive in {text!r}")
            if not pieces:
                raise OrdinalDomainError(f"summand {summand!r} has no factor")
            exponent = _factors_to_exponent(pieces, text)
            exponents.extend([exponent] * repeat)
        preimage = CnfOrdinal()
        for e in exponents:
            preimage = cnf_add(preimage, omega_to(e))
        result = cls(preimage)
        if str(result) != source:
            raise OrdinalDomainError(f"{text!r} is not in normal form (expected {result})")
        return result

    @property
    def is_zero(self) -> bool:
        return self.preimage.is_zero

    def __add__(self, other: "UTerm") -> "UTerm":
        return UTerm(cnf_add(self.preimage, other.preimage))

    def __mul__(self, other: "UTerm") -> "UTerm":
        return UTerm(cnf_mul(self.preimage, other.preimage))

    def compare(self, other: "UTerm") -> Ordering:
        return Ordering.of(self.preimage, other.preimage)

    def sort_key(self):
        return self.preimage.terms

    def __str__(self) -> str:
        if self.preimage.is_zero:
            return "0"
        parts = []
        for e, count in self.preimage.grouped():
            if e == ():
                parts.append("w" if count == 1 else f"w*{count}")
                continue
            factors = []
            for power, coeff in e:
                factors.extend(["w1" if power == 0 else f"u{power + 1}"] * coeff)
            product = "*".join(factors)
            parts.append(product if count == 1 else f"{product}*{count}")
        return "+".join(parts)


def _factors_to_exponent(pieces: list[str], text: str) -> Exponent:
    if pieces == ["w"]:
        return ()
    pairs: list[tuple[int, int]] = []
    for piece in pieces:
        match = _FACTOR.match(piece)
        if not match or piece == "w":
            raise OrdinalDomainError(f"bad factor {piece!r} in {text!r}")
        power = 0 if piece == "w1" else int(match.group(2)) - 1
        if power < 0:
            raise OrdinalDomainError(f"u0 is not a factor, in {text!r}")
        if pairs and pairs[-1][0] == power:
            pairs[-1] = (power, pairs[-1][1] + 1)
        elif pairs and pairs[-1][0] < power:
            raise OrdinalDomainError(f"factors must descend in {text!r}")
        else:
            pairs.append((power, 1))
    return tuple(pairs)


def hat(xi: CnfOrdinal) -> UTerm:
    """The ordinal assignment xi -> hat(xi): 0 -> 0, 1 -> omega, omega^omega -> u_2, and so on."""
    return UTerm(xi)


def unhat(u: UTerm) -> CnfOrdinal:
    return u.preimage
