"""Derivations on (quotient) polynomial rings and finite presentations of 1-foliations."""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Sequence

from .algebra import Ideal, Poly, QuotientRing, Ring, RingMismatch, gcd_many, module_membership
from .algebra.groebner import exact_divide
from .algebra.linalg import rref
from .errors import StructuralError, UnsupportedInput


def as_qring(ring: Ring | QuotientRing) -> QuotientRing:
    return ring if isinstance(ring, QuotientRing) else QuotientRing(ring)


class Derivation:
    """D = sum coeffs[i] * d/dx_i on a (quotient) polynomial ring."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: Ring | QuotientRing, coeffs: Sequence[Poly | int | str], check: bool = True):
        ring = as_qring(ring)
        amb = ring.ambient
        if len(coeffs) != amb.nvars:
            raise ValueError(f"expected {amb.nvars} coefficients, got {len(coeffs)}")
        self.ring = ring
        self.coeffs = tuple(ring.reduce(amb(c)) for c in coeffs)
        if check and not ring.relations.is_zero():
            for g in ring.relations.generators:
                if not ring.is_zero(self._apply_raw(g)):
                    raise StructuralError(f"{self} does not preserve the relation {g}")

    @property
    def poly_ring(self) -> Ring:
        return self.ring.ambient

    @classmethod
    def partial(cls, ring: Ring | QuotientRing, i: int | str) -> "Derivation":
        ring = as_qring(ring)
        amb = ring.ambient
        if isinstance(i, str):
            i = amb.index(i)
        return cls(ring, [amb.one() if j == i else amb.zero() for j in range(amb.nvars)])

    @classmethod
    def diagonal(cls, ring: Ring | QuotientRing, eigenvalues: Sequence[int]) -> "Derivation":
        """sum eigenvalues[i] * x_i d/dx_i."""
        ring = as_qring(ring)
        amb = ring.ambient
        return cls(ring, [amb.var(i).scale(a) for i, a in enumerate(eigenvalues)])

    def _apply_raw(self, f: Poly) -> Poly:
        out = self.poly_ring.zero()
        for i, c in enumerate(self.coeffs):
            if c:
                d = f.diff(i)
                if d:
                    out = out + c * d
        return out

    def __call__(self, f: Poly | int | str) -> Poly:
        f = self.poly_ring(f)
        return self.ring.reduce(self._apply_raw(f))

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def _same_ring(self, other: "Derivation"):
        if self.ring != other.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")

    def __add__(self, other: "Derivation") -> "Derivation":
        self._same_ring(other)
        return Derivation(self.ring, [a + b for a, b in zip(self.coeffs, other.coeffs)], check=False)

    def __sub__(self, other: "Derivation") -> "Derivation":
        self._same_ring(other)
        return Derivation(self.ring, [a - b for a, b in zip(self.coeffs, other.coeffs)], check=False)

    def __neg__(self) -> "Derivation":
        return Derivation(self.ring, [-a for a in self.coeffs], check=False)

    def scale(self, c: Poly | int) -> "Derivation":
        """c * D for a ring element or scalar c."""
        if isinstance(c, int):
            return Derivation(self.ring, [a.scale(c) for a in self.coeffs], check=False)
        return Derivation(self.ring, [a * c for a in self.coeffs], check=False)

    def __eq__(self, other):
        if not isinstance(other, Derivation):
            return NotImplemented
        return self.ring == other.ring and all(
            self.ring.equal(a, b) for a, b in zip(self.coeffs, other.coeffs)
        )

    def __hash__(self):
        return hash(self.coeffs)

    def vector(self) -> list[Poly]:
        return list(self.coeffs)

    def translate(self, point: Sequence[int]) -> "Derivation":
        """Conjugate by x -> x + point (coefficients substituted, frame unchanged)."""
        if not self.ring.is_polynomial_ring():
            raise UnsupportedInput("translation is only supported on polynomial rings")
        return Derivation(self.ring, [c.translate(point) for c in self.coeffs], check=False)

    def __str__(self):
        names = self.poly_ring.names
        parts = []
        for n, c in zip(names, self.coeffs):
            if c.is_zero():
                continue
            s = str(c)
            if c == 1:
                parts.append(f"d/d{n}")
            elif len(c.terms) == 1:
                parts.append(f"{s}*d/d{n}")
            else:
                parts.append(f"({s})*d/d{n}")
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"Derivation({self})"


def apply(D: Derivation, f: Poly) -> Poly:
    return D(f)


def lie_bracket(D1: Derivation, D2: Derivation) -> Derivation:
    D1._same_ring(D2)
    coeffs = [D1(b) - D2(a) for a, b in zip(D1.coeffs, D2.coeffs)]
    return Derivation(D1.ring, coeffs, check=False)


def iterate(D: Derivation, f: Poly, k: int) -> Poly:
    for _ in range(k):
        if f.is_zero():
            break
        f = D(f)
    return f


def p_power(D: Derivation) -> Derivation:
    """D^[p], the p-fold composition (a derivation in characteristic p)."""
    p = D.poly_ring.p
    coeffs = [iterate(D, x, p) for x in D.poly_ring.gens()]
    return Derivation(D.ring, coeffs, check=False)


# -- presentations -----------------------------------------------------------


def _det(M: list[list[Poly]], zero: Poly) -> Poly:
    n = len(M)
    if n == 1:
        return M[0][0]
    if n == 2:
        return M[0][0] * M[1][1] - M[0][1] * M[1][0]
    total = zero
    for j in range(n):
        if M[0][j].is_zero():
            continue
        minor = [row[:j] + row[j + 1 :] for row in M[1:]]
        term = M[0][j] * _det(minor, zero)
        total = total + term if j % 2 == 0 else total - term
    return total


def minors(rows: Sequence[Sequence[Poly]], r: int) -> list[Poly]:
    """All r x r minors of a matrix with len(rows) rows."""
    if not rows:
        return []
    zero = rows[0][0].ring.zero()
    out = []
    ncols = len(rows[0])
    for ri in combinations(range(len(rows)), r):
        for ci in combinations(range(ncols), r):
            out.append(_det([[rows[i][j] for j in ci] for i in ri], zero))
    return out


class FoliationPresentation:
    """Finite list of derivations generating a submodule of the tangent module."""

    def __init__(self, generators: Iterable[Derivation], declared_rank: int | None = None):
        gens = list(generators)
        if not gens:
            raise ValueError("a presentation needs at least one generator")
        ring = gens[0].ring
        for g in gens[1:]:
            if g.ring != ring:
                raise RingMismatch(f"{g.ring} vs {ring}")
        self.ring = ring
        self.generators = tuple(gens)
        self.declared_rank = declared_rank

    @property
    def poly_ring(self) -> Ring:
        return self.ring.ambient

    def matrix(self) -> list[list[Poly]]:
        return [list(g.coeffs) for g in self.generators]

    def contains(self, D: Derivation) -> bool:
        return self.coefficients_of(D) is not None

    def coefficients_of(self, D: Derivation) -> list[Poly] | None:
        rels = self.ring.relations.groebner()
        return module_membership(D.vector(), [g.vector() for g in self.generators], rels)

    def translate(self, point: Sequence[int]) -> "FoliationPresentation":
        return FoliationPresentation([g.translate(point) for g in self.generators], self.declared_rank)

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def __str__(self):
        return "<" + ", ".join(str(g) for g in self.generators) + ">"

    def __repr__(self):
        return f"FoliationPresentation({self})"


def is_involutive(F: FoliationPresentation) -> bool:
    gens = F.generators
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            br = lie_bracket(gens[i], gens[j])
            if not br.is_zero() and not F.contains(br):
                return False
    return True


def is_p_closed(F: FoliationPresentation) -> bool:
    for g in F.generators:
        q = p_power(g)
        if not q.is_zero() and not F.contains(q):
            return False
    return True


def generic_rank(F: FoliationPresentation) -> int:
    rows = F.matrix()
    n = F.poly_ring.nvars
    for r in range(min(len(rows), n), 0, -1):
        if any(not F.ring.is_zero(m) for m in minors(rows, r)):
            return r
    return 0


def jacobian_ideal(Q: QuotientRing) -> Ideal:
    """Relations plus the c x c minors of their Jacobian, c = number of relations.

    For a complete intersection this cuts out the singular locus.
    """
    rels = list(Q.relations.generators)
    amb = Q.ambient
    if not rels:
        return Ideal(amb)
    jac = [[f.diff(i) for i in range(amb.nvars)] for f in rels]
    return Ideal(amb, rels + minors(jac, len(rels)))


def localize_unit(I: Ideal, inverted: Sequence[Poly] = ()) -> bool:
    """1 in I after inverting the given elements (Rabinowitsch trick)."""
    if I.is_unit():
        return True
    h = None
    for g in inverted:
        if not g.is_constant():
            h = g if h is None else h * g
    if h is None:
        return False
    from .algebra import radical_contains

    return radical_contains(I, h)


def is_regular_ambient(Q: QuotientRing, inverted: Sequence[Poly] = ()) -> bool:
    if Q.is_polynomial_ring():
        return True
    return localize_unit(jacobian_ideal(Q), inverted)


def singular_ideal(F: FoliationPresentation, inverted: Sequence[Poly] = ()) -> Ideal:
    """Ideal of r x r minors (r the generic rank), plus the relations of the ring."""
    if not is_regular_ambient(F.ring, inverted):
        raise UnsupportedInput(f"ambient ring {F.ring} is not regular")
    r = generic_rank(F)
    amb = F.poly_ring
    if r == 0:
        return Ideal(amb, list(F.ring.relations.generators))
    gens = [m for m in minors(F.matrix(), r) if not m.is_zero()]
    return Ideal(amb, gens + list(F.ring.relations.generators))


def is_regular(F: FoliationPresentation, inverted: Sequence[Poly] = ()) -> bool:
    return localize_unit(singular_ideal(F, inverted), inverted)


def saturate_rank_one(D: Derivation) -> Derivation:
    """D divided by the gcd of its coefficients."""
    if not D.ring.is_polynomial_ring():
        raise UnsupportedInput("rank-one saturation needs a polynomial ring")
    nz = [c for c in D.coeffs if not c.is_zero()]
    if not nz:
        raise ValueError("cannot saturate the zero derivation")
    g = gcd_many(nz)
    if g.is_constant():
        return D
    return Derivation(D.ring, [exact_divide(c, g) for c in D.coeffs], check=False)


def is_saturated(F: FoliationPresentation) -> bool:
    """Torsion-freeness of T/F for a presentation with independent generators.

    Over a polynomial ring, the cokernel of an injective map R^r -> R^n is
    torsion free iff its maximal minors generate an ideal of height >= 2,
    i.e. iff their gcd is 1.
    """
    if not F.ring.is_polynomial_ring():
        raise UnsupportedInput("saturation test needs a polynomial ring")
    r = len(F.generators)
    if generic_rank(F) != r:
        return False
    ms = [m for m in minors(F.matrix(), r) if not m.is_zero()]
    return gcd_many(ms).is_constant()


def _column_pattern(rows: list[list[Poly]]) -> tuple[list[list[int]], list[Poly]] | None:
    """Write the matrix as A * diag(m) with A constant, if possible."""
    ncols = len(rows[0])
    ring = rows[0][0].ring
    A = [[0] * ncols for _ in rows]
    mons = []
    for j in range(ncols):
        col = [row[j] for row in rows]
        base = next((c for c in col if not c.is_zero()), None)
        if base is None:
            mons.append(ring.one())
            continue
        lead = next(iter(base.terms.values()))
        from .algebra import inv_mod

        base = base.scale(inv_mod(lead, ring.p))
        for i, c in enumerate(col):
            if c.is_zero():
                continue
            # c must be a constant multiple of base
            e0 = next(iter(base.terms))
            k = c.coeff(e0)
            if not k or c != base.scale(k):
                return None
            A[i][j] = k
        mons.append(base)
    return A, mons


def saturate_presentation(F: FoliationPresentation) -> FoliationPresentation:
    """A saturated presentation of the submodule generated by F.

    Rank one is handled by gcd division.  Higher rank is supported when the
    coefficient matrix factors as A * diag(m_1, ..., m_n) with A constant:
    row-reduce A, divide each row by its gcd, then certify torsion-freeness.
    Anything else raises UnsupportedInput.
    """
    if not F.ring.is_polynomial_ring():
        raise UnsupportedInput("saturation needs a polynomial ring")
    gens = [g for g in F.generators if not g.is_zero()]
    if not gens:
        raise ValueError("zero foliation")
    r = generic_rank(FoliationPresentation(gens))
    if r == 1:
        # every generator is a multiple of one primitive vector
        base = saturate_rank_one(gens[0])
        for g in gens[1:]:
            s = saturate_rank_one(g)
            if s != base and s != -base and not _proportional(s, base):
                raise UnsupportedInput("rank-one presentation with non-proportional generators")
        return FoliationPresentation([base], F.declared_rank)
    rows = [list(g.coeffs) for g in gens]
    pat = _column_pattern(rows)
    if pat is None:
        cand = FoliationPresentation(gens, F.declared_rank)
        if len(gens) == r and is_saturated(cand):
            return cand
        raise UnsupportedInput(f"cannot saturate presentation {F}")
    A, mons = pat
    p = F.poly_ring.p
    R, pivots = rref(A, p)
    out = []
    for row in R[: len(pivots)]:
        vec = [m.scale(a) for a, m in zip(row, mons)]
        out.append(saturate_rank_one(Derivation(F.ring, vec, check=False)))
    G = FoliationPresentation(out, F.declared_rank)
    if len(out) != r or not is_saturated(G):
        raise UnsupportedInput(f"saturation of {F} is not certified")
    return G


def _proportional(a: Derivation, b: Derivation) -> bool:
    p = a.poly_ring.p
    for c in range(1, p):
        if a == b.scale(c):
            return True
    return False
