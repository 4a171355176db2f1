"""Random instance generators and brute-force checks shared by the test modules."""

import random

from folres.algebra import Poly, Ring
from folres.algebra.linalg import rref
from folres.algebra.poly import monomials_up_to
from folres.derivations import Derivation


def random_poly(rng: random.Random, ring: Ring, maxdeg: int, nterms: int = 3) -> Poly:
    mons = monomials_up_to(ring.nvars, maxdeg)
    f = ring.zero()
    for _ in range(nterms):
        f = f + ring.monomial(rng.choice(mons), rng.randrange(1, ring.p))
    return f


def random_derivation(rng: random.Random, ring: Ring, maxdeg: int, nterms: int = 2) -> Derivation:
    return Derivation(ring, [random_poly(rng, ring, maxdeg, nterms) for _ in range(ring.nvars)])


def brute_force_member(f: Poly, gens, D: int) -> bool:
    """f lies in the F_p-span of {m * g : deg(m * g) <= D}; sound but truncated."""
    ring = f.ring
    rows = []
    for g in gens:
        if g.is_zero():
            continue
        for e in monomials_up_to(ring.nvars, D - g.degree()):
            rows.append(ring.monomial(e) * g)
    if f.is_zero():
        return True
    cols = sorted({e for r in rows for e in r.terms} | set(f.terms))
    mat = [[r.coeff(e) for e in cols] for r in rows]
    r0 = len(rref(mat, ring.p)[1]) if mat else 0
    r1 = len(rref(mat + [[f.coeff(e) for e in cols]], ring.p)[1])
    return r0 == r1


def compose(D: Derivation, f: Poly, k: int) -> Poly:
    for _ in range(k):
        f = D(f)
    return f
