"""Rees algebras of weighted coordinate ideals and weighted blow-up charts.

A weighted chart D_+(x_i) is represented by its smooth cover with a cyclic
group action; derivations are pulled back to the cover and checked for
invariance there.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .algebra import Ideal, Poly, Ring
from .algebra.groebner import groebner_basis, normal_form
from .algebra.poly import monomials_of_degree
from .blowup import Chart, CyclicAction, Pullback, make_blowup_charts, pullback_derivation
from .derivations import Derivation, FoliationPresentation, localize_unit, singular_ideal
from .errors import EquivarianceError, UnsupportedInput


# -- Rees algebras ------------------------------------------------------------


@dataclass(frozen=True)
class ReesAlgebra:
    """sum_i (g_i, d_i): degree m part generated by prod g_i^ceil(m_i/d_i), sum m_i = m."""

    terms: tuple[tuple[Poly, int], ...]

    def __init__(self, terms: Sequence[tuple[Poly, int]]):
        terms = tuple((g, int(d)) for g, d in terms)
        if not terms:
            raise ValueError("a Rees algebra needs at least one generator")
        ring = terms[0][0].ring
        for g, d in terms:
            if d < 1:
                raise ValueError("weights must be positive")
            if g.ring != ring:
                raise ValueError("generators must share a ring")
        object.__setattr__(self, "terms", terms)

    @property
    def ring(self) -> Ring:
        return self.terms[0][0].ring

    def exponent_vectors(self, m: int) -> list[tuple[int, ...]]:
        """Minimal exponent vectors (ceil(m_i/d_i))_i over compositions of m."""
        n = len(self.terms)
        ws = [d for _, d in self.terms]
        vecs = set()
        for comp in monomials_of_degree(n, m):
            vecs.add(tuple(-(-mi // d) for mi, d in zip(comp, ws)))
        minimal = [
            v for v in vecs if not any(w != v and all(a <= b for a, b in zip(w, v)) for w in vecs)
        ]
        return sorted(minimal, reverse=True)

    def degree_part_generators(self, m: int, below: int | None = None) -> list[Poly]:
        """Generators of the degree m part; with ``below`` set, computed modulo (x)^below."""
        gens = [g for g, _ in self.terms]
        if below is not None:
            gens = [g.truncate(below) for g in gens]
        out = []
        for v in self.exponent_vectors(m):
            f = self.ring.one()
            for g, k in zip(gens, v):
                for _ in range(k):
                    f = f * g
                    if below is not None:
                        f = f.truncate(below)
            out.append(f)
        return out

    def __str__(self):
        return " + ".join(f"({g}, {d})" for g, d in self.terms)


def rees_degree_part(R: ReesAlgebra, m: int) -> Ideal:
    if m < 0:
        raise ValueError("degree must be nonnegative")
    return Ideal(R.ring, R.degree_part_generators(m))


def _max_ideal_power(ring: Ring, m: int) -> list[Poly]:
    return [ring.monomial(e) for e in monomials_of_degree(ring.nvars, m)]


def _is_monomial_family(polys: Sequence[Poly]) -> bool:
    return all(len(f.terms) == 1 for f in polys)


def _in_monomial_ideal(f: Poly, mons: list[tuple[int, ...]]) -> bool:
    return all(any(all(a <= b for a, b in zip(m, e)) for m in mons) for e in f.terms)


def rees_contained_up_to(R1: ReesAlgebra, R2: ReesAlgebra, M: int, local: bool = False) -> bool:
    """R1_m contained in R2_m for all m <= M.

    With ``local=True`` the containment is tested in the local ring at the
    origin, by membership in R2_m + (x)^m.  This is exact when the
    generators of R2 form a regular system of parameters at the origin,
    because then (x)^m is already contained in R2_m locally and the sum is
    primary to the maximal ideal.
    """
    return rees_containment_witness(R1, R2, M, local) is None


def rees_containment_witness(
    R1: ReesAlgebra, R2: ReesAlgebra, M: int, local: bool = False
) -> tuple[int, Poly] | None:
    """First (m, generator of R1_m) not in R2_m, or None if contained up to M."""
    if R1.ring != R2.ring:
        raise ValueError("Rees algebras over different rings")
    ring = R1.ring
    for m in range(1, M + 1):
        below = m if local else None
        lhs = R1.degree_part_generators(m, below)
        rhs = R2.degree_part_generators(m, below)
        if local:
            lhs = [f for f in lhs if not f.is_zero()]
            rhs = [f for f in rhs if not f.is_zero()] + _max_ideal_power(ring, m)
        if _is_monomial_family(rhs):
            mons = [next(iter(f.terms)) for f in rhs]
            for f in lhs:
                if not _in_monomial_ideal(f, mons):
                    return m, f
            continue
        basis = groebner_basis(rhs)
        for f in lhs:
            if not normal_form(f, basis).is_zero():
                return m, f
    return None


# -- weighted charts -------------------------------------------------------------


def weighted_blowup_charts(
    chart: Chart,
    centers: Sequence[tuple[int | str, int]],
    point: Sequence[int] | None = None,
    Qinv: Sequence[Sequence[int]] | None = None,
    inverted_extra: Sequence[Poly] = (),
) -> list[Chart]:
    """Covers of the charts D_+(x_i) of the weighted blow-up of sum (x_i, d_i).

    D_+(x_i) has structure map x_i = u^{d_i}, x_j = u^{d_j} v_j for other center
    variables and x_j = v_j otherwise, with mu_{d_i} acting by weight 1 on u
    and -d_j on v_j.  The cover variable keeps the name of x_i.
    """
    p = chart.poly_ring.p
    cs = []
    for i, d in centers:
        if isinstance(i, str):
            i = chart.poly_ring.index(i)
        if d % p == 0:
            raise UnsupportedInput(f"weight {d} is divisible by p={p}; the blow-up is not tame")
        cs.append((i, d))
    kind = "weighted" if any(d > 1 for _, d in cs) else "blowup"
    return make_blowup_charts(chart, cs, point, Qinv, inverted_extra, kind)


def mu_d_character(D: Derivation, action: CyclicAction) -> int | None:
    """chi with weight(coeff_z monomial) == weight(z) + chi for all terms, else None.

    chi = 0 means D is invariant; any chi means the submodule generated by D is
    stable under the group.
    """
    chi = None
    for z, c in enumerate(D.coeffs):
        wz = action.weights[z]
        for e in c.terms:
            val = (action.weight(e) - wz) % action.order
            if chi is None:
                chi = val
            elif val != chi:
                return None
    return 0 if chi is None else chi


def _as_actions(group) -> list[CyclicAction]:
    if isinstance(group, Chart):
        return list(group.actions)
    if isinstance(group, CyclicAction):
        return [group]
    if isinstance(group, tuple) and len(group) == 2 and isinstance(group[0], int):
        return [CyclicAction(group[0], tuple(group[1]))]
    return list(group)


def mu_d_invariant(D: Derivation, weights) -> bool:
    """Invariance of D under a chart's group, a CyclicAction, or a (d, weights) pair."""
    return all(mu_d_character(D, a) == 0 for a in _as_actions(weights))


def mu_d_stable(D: Derivation, weights) -> bool:
    """The submodule generated by D is stable (D is a semi-invariant)."""
    return all(mu_d_character(D, a) is not None for a in _as_actions(weights))


def pullback_derivation_weighted(D: Derivation, wchart: Chart) -> Pullback:
    """Pullback to the cover of a weighted chart, checked for invariance.

    Cleared powers of the cover variable are rounded to multiples of the
    chart's new group order so that clearing cannot break invariance.
    """
    d = cover_weight(wchart)
    pb = pullback_derivation(D, wchart, clear_multiple=d)
    if not mu_d_invariant(pb.derivation, wchart):
        raise EquivarianceError(f"pullback {pb.derivation} is not invariant on {wchart.summary()}")
    return pb


def cover_weight(chart: Chart) -> int:
    """Weight of the cover variable in the chart's center (1 for non-weighted charts)."""
    if not chart.weights or chart.cover is None:
        return 1
    name = chart.poly_ring.names[chart.cover]
    return chart.weights[list(chart.center).index(name)]


def chart_regularity(F: FoliationPresentation, chart: Chart, check_invariance: bool = True) -> bool:
    """Unit singular ideal of F on the chart's cover (after inverting chart.inverted)."""
    if check_invariance:
        for g in F.generators:
            if not mu_d_invariant(g, chart):
                raise EquivarianceError(f"generator {g} is not invariant on {chart.summary()}")
    return localize_unit(singular_ideal(F, chart.inverted), chart.inverted)
