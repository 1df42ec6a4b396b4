"""Ordinal kernel: Cantor normal forms, hat images and BK comparison."""

from leveltrees.ordinals.bk import BkDomainError, bk_cmp, bk_key, bk_sorted
from leveltrees.ordinals.cnf import (
    OMEGA,
    ONE,
    ZERO,
    CnfOrdinal,
    OrdinalDomainError,
    OrdinalOverflowError,
    Ordering,
    cnf_add,
    cnf_cmp,
    cnf_mul,
    omega_power,
)
from leveltrees.ordinals.uterm import UTerm, hat, unhat

__all__ = [
    "OMEGA",
    "ONE",
    "ZERO",
    "BkDomainError",
    "CnfOrdinal",
    "OrdinalDomainError",
    "OrdinalOverflowError",
    "Ordering",
    "UTerm",
    "bk_cmp",
    "bk_key",
    "bk_sorted",
    "cnf_add",
    "cnf_cmp",
    "cnf_mul",
    "hat",
    "omega_power",
    "unhat",
]
