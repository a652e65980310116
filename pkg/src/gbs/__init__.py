"""Executable constructions for the groups Z[1/k] x| Z^n and their hyperbolic structures."""

from .arith import factorize, full_divisors, to_base_k, from_base_k
from .group import BSGroup, Character, GroupElement, rho_minus, rho_plus

__all__ = [
    "BSGroup",
    "Character",
    "GroupElement",
    "factorize",
    "from_base_k",
    "full_divisors",
    "rho_minus",
    "rho_plus",
    "to_base_k",
]
