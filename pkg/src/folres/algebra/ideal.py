"""Ideals, quotient rings and the standard ideal operations built on Groebner bases."""

from __future__ import annotations

import threading
from typing import Iterable, Sequence

from . import groebner as gb
from .poly import Poly, Ring, RingMismatch


class Ideal:
    """Finitely generated ideal with lazily cached Groebner bases (one per order)."""

    def __init__(self, ring: Ring, generators: Iterable[Poly | int | str] = ()):
        self.ring = ring
        gens = []
        for g in generators:
            g = ring(g)
            if not g.is_zero():
                gens.append(g)
        self.generators: tuple[Poly, ...] = tuple(gens)
        self._gb: dict = {}
        self._lock = threading.Lock()

    # -- Groebner data ---------------------------------------------------
    def groebner(self, order="grevlex") -> list[Poly]:
        key = order if isinstance(order, str) else id(order)
        with self._lock:
            cached = self._gb.get(key)
        if cached is None:
            cached = gb.groebner_basis(self.generators, order)
            with self._lock:
                self._gb.setdefault(key, cached)
        return list(cached)

    def reduce(self, f: Poly) -> Poly:
        self._check(f)
        return gb.normal_form(f, self.groebner())

    def contains(self, f: Poly | int | str) -> bool:
        f = self.ring(f)
        if f.is_zero():
            return True
        return self.reduce(f).is_zero()

    __contains__ = contains

    def contains_ideal(self, other: "Ideal") -> bool:
        return all(self.contains(g) for g in other.generators)

    def is_unit(self) -> bool:
        basis = self.groebner()
        return len(basis) == 1 and basis[0].is_constant()

    def is_zero(self) -> bool:
        return not self.generators

    def __eq__(self, other):
        if not isinstance(other, Ideal):
            return NotImplemented
        return self.ring == other.ring and self.groebner() == other.groebner()

    def __hash__(self):
        return hash((self.ring, tuple(self.groebner())))

    def _check(self, f: Poly):
        if f.ring != self.ring:
            raise RingMismatch(f"{f.ring} vs {self.ring}")

    # -- operations ------------------------------------------------------
    def __add__(self, other: "Ideal") -> "Ideal":
        if other.ring != self.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")
        return Ideal(self.ring, self.generators + other.generators)

    def __mul__(self, other: "Ideal") -> "Ideal":
        if other.ring != self.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")
        return Ideal(self.ring, [f * g for f in self.generators for g in other.generators])

    def power(self, k: int) -> "Ideal":
        out = Ideal(self.ring, [1])
        for _ in range(k):
            out = Ideal(self.ring, [g for g in (out * self).groebner()])
        return out

    def quotient(self, f: Poly) -> "Ideal":
        return ideal_quotient(self, f)

    def saturate(self, f: Poly) -> "Ideal":
        return saturation(self, f)

    def __repr__(self):
        return f"Ideal({', '.join(str(g) for g in self.generators) or '0'})"


# -- elimination helpers -----------------------------------------------------


def _extend(ring: Ring, k: int, prefix: str = "_t") -> tuple[Ring, list[int]]:
    """Ring with k fresh variables in front; returns it and the old positions."""
    names = tuple(f"{prefix}{i}" for i in range(k)) + ring.names
    while len(set(names)) != len(names):
        prefix += "_"
        names = tuple(f"{prefix}{i}" for i in range(k)) + ring.names
    return Ring(names, ring.p), list(range(k, k + ring.nvars))


def eliminate_front(polys: Sequence[Poly], k: int, ring: Ring) -> list[Poly]:
    """Generators of (polys) intersected with the subring of the last variables.

    ``polys`` live in an extended ring whose first k variables are eliminated;
    the result is mapped back to ``ring``.
    """
    basis = gb.groebner_basis(polys, gb.elimination_key(k))
    out = []
    for g in basis:
        if all(not any(e[:k]) for e in g.terms):
            out.append(Poly._raw(ring, {e[k:]: c for e, c in g.terms.items()}))
    return out


def intersection(I: Ideal, J: Ideal) -> Ideal:
    ring = I.ring
    big, pos = _extend(ring, 1)
    t = big.var(0)
    gens = [t * g.change_ring(big, pos) for g in I.generators]
    gens += [(1 - t) * g.change_ring(big, pos) for g in J.generators]
    if not I.generators or not J.generators:
        return Ideal(ring)
    return Ideal(ring, eliminate_front(gens, 1, ring))


def ideal_quotient(I: Ideal, f: Poly) -> Ideal:
    """(I : f) = {g : g f in I}."""
    f = I.ring(f)
    if f.is_zero():
        raise ValueError("quotient by the zero polynomial")
    if f.is_constant() or I.is_zero():
        return Ideal(I.ring, I.generators)
    inter = intersection(I, Ideal(I.ring, [f]))
    gens = []
    for g in inter.generators:
        q = gb.exact_divide(g, f)
        if q is None:  # pragma: no cover - intersection is always inside (f)
            raise ArithmeticError("intersection element not divisible by f")
        gens.append(q)
    return Ideal(I.ring, gens)


def saturation(I: Ideal, f: Poly) -> Ideal:
    """I : f^infinity, by iterating the quotient to a fixed point."""
    f = I.ring(f)
    if f.is_zero():
        raise ValueError("saturation by the zero polynomial")
    if f.is_constant():
        return Ideal(I.ring, I.generators)
    # one-shot Rabinowitsch elimination is usually cheaper than iterating
    ring = I.ring
    big, pos = _extend(ring, 1)
    t = big.var(0)
    gens = [g.change_ring(big, pos) for g in I.generators]
    gens.append(1 - t * f.change_ring(big, pos))
    if not I.generators:
        return Ideal(ring)
    return Ideal(ring, eliminate_front(gens, 1, ring))


def saturation_iterated(I: Ideal, f: Poly) -> Ideal:
    """Same as :func:`saturation` but via repeated quotients (used as a cross-check)."""
    cur = I
    while True:
        nxt = ideal_quotient(cur, f)
        if nxt == cur:
            return nxt
        cur = nxt


def radical_contains(I: Ideal, f: Poly) -> bool:
    """f in rad(I), via 1 in I + (1 - t f)."""
    f = I.ring(f)
    if f.is_zero():
        return True
    ring = I.ring
    big, pos = _extend(ring, 1)
    t = big.var(0)
    gens = [g.change_ring(big, pos) for g in I.generators]
    gens.append(1 - t * f.change_ring(big, pos))
    return Ideal(big, gens).is_unit()


def ideal_membership(f: Poly, I: Ideal) -> bool:
    I._check(f)
    return I.contains(f)


def is_unit_ideal(I: Ideal) -> bool:
    return I.is_unit()


def groebner_basis(I: Ideal, order="grevlex") -> list[Poly]:
    return I.groebner(order)


class QuotientRing:
    """R / relations, with normal forms modulo a cached Groebner basis."""

    def __init__(self, ambient: Ring, relations: Ideal | Iterable[Poly] = ()):
        self.ambient = ambient
        if not isinstance(relations, Ideal):
            relations = Ideal(ambient, relations)
        if relations.ring != ambient:
            raise RingMismatch(f"{relations.ring} vs {ambient}")
        self.relations = relations

    @property
    def p(self) -> int:
        return self.ambient.p

    @property
    def names(self) -> tuple[str, ...]:
        return self.ambient.names

    @property
    def nvars(self) -> int:
        return self.ambient.nvars

    def is_polynomial_ring(self) -> bool:
        return self.relations.is_zero()

    def is_zero_ring(self) -> bool:
        return self.relations.is_unit()

    def reduce(self, f: Poly) -> Poly:
        if self.relations.is_zero():
            return f
        return self.relations.reduce(f)

    def equal(self, f: Poly, g: Poly) -> bool:
        return self.reduce(f - g).is_zero()

    def is_zero(self, f: Poly) -> bool:
        return self.reduce(f).is_zero()

    def ideal(self, gens: Iterable[Poly]) -> Ideal:
        """Preimage in the ambient ring of the ideal generated by ``gens``."""
        return Ideal(self.ambient, list(gens) + list(self.relations.generators))

    def __eq__(self, other):
        if not isinstance(other, QuotientRing):
            return NotImplemented
        return self.ambient == other.ambient and self.relations == other.relations

    def __hash__(self):
        return hash((self.ambient, tuple(self.relations.groebner())))

    def __str__(self):
        if self.relations.is_zero():
            return str(self.ambient)
        rels = ", ".join(str(g) for g in self.relations.groebner())
        return f"{self.ambient}/({rels})"
