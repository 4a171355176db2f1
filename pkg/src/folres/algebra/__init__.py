from .gcd import gcd, gcd_many, lcm, make_monic
from .groebner import divide, exact_divide, groebner_basis as groebner_basis_of, module_membership
from .ideal import (
    Ideal,
    QuotientRing,
    groebner_basis,
    ideal_membership,
    ideal_quotient,
    intersection,
    is_unit_ideal,
    radical_contains,
    saturation,
)
from .parse import ParseError, parse_poly
from .poly import Poly, Ring, RingMismatch, inv_mod, is_prime, lift

__all__ = [
    "Ideal",
    "ParseError",
    "Poly",
    "QuotientRing",
    "Ring",
    "RingMismatch",
    "divide",
    "exact_divide",
    "gcd",
    "gcd_many",
    "groebner_basis",
    "groebner_basis_of",
    "ideal_membership",
    "ideal_quotient",
    "intersection",
    "inv_mod",
    "is_prime",
    "is_unit_ideal",
    "lcm",
    "lift",
    "make_monic",
    "module_membership",
    "parse_poly",
    "radical_contains",
    "saturation",
]
