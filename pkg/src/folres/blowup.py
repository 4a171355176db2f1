"""Blow-up charts along coordinate centers and pullback of derivations.

A chart is an affine (quotient) polynomial ring with a structure map to its
parent, given as the images of the parent variables.  Ordinary and weighted
blow-ups, translations and linear coordinate changes are all charts of this
kind, and derivations are pulled back through the same Jacobian formula:
if J is the Jacobian of the structure map then the pullback is
adj(J) * phi(D) / det(J), with leftover powers of the exceptional variable
cleared and recorded.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .algebra import Ideal, Poly, QuotientRing, Ring, inv_mod, saturation
from .algebra.groebner import exact_divide
from .derivations import Derivation, FoliationPresentation, _det, as_qring
from .errors import StructuralError, UnsupportedInput


@dataclass(frozen=True)
class CyclicAction:
    """mu_d acting on the chart variables with the given weights mod d."""

    order: int
    weights: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(w % self.order for w in self.weights))

    def weight(self, exp: Sequence[int]) -> int:
        return sum(e * w for e, w in zip(exp, self.weights)) % self.order

    def to_dict(self) -> dict:
        return {"order": self.order, "weights": list(self.weights)}


@dataclass
class Chart:
    ring: QuotientRing
    to_parent: tuple[Poly, ...] = ()
    exceptional: Poly | None = None
    actions: tuple[CyclicAction, ...] = ()
    inverted: tuple[Poly, ...] = ()
    kind: str = "root"
    center: tuple[str, ...] = ()
    weights: tuple[int, ...] = ()
    cover: int | None = None
    # parent variable eliminated by an "eliminate" chart
    eliminated: int | None = None

    @property
    def poly_ring(self) -> Ring:
        return self.ring.ambient

    @property
    def group_order(self) -> int:
        out = 1
        for a in self.actions:
            out *= a.order
        return out

    @property
    def action_weights(self) -> tuple[int, tuple[int, ...]] | None:
        """(d, weights) for a single cyclic factor; None for the trivial group."""
        acts = [a for a in self.actions if a.order > 1]
        if not acts:
            return None
        if len(acts) == 1:
            return acts[0].order, acts[0].weights
        raise UnsupportedInput("chart group has several cyclic factors; use .actions")

    def is_schematic(self) -> bool:
        return all(a.order == 1 for a in self.actions)

    def summary(self) -> str:
        s = str(self.ring)
        if self.inverted:
            s += " [" + ", ".join(f"1/({h})" for h in self.inverted) + "]"
        acts = [a for a in self.actions if a.order > 1]
        if acts:
            s += " / " + " x ".join(f"mu_{a.order}{list(a.weights)}" for a in acts)
        return s


def root_chart(ring: Ring | QuotientRing, inverted: Sequence[Poly] = ()) -> Chart:
    return Chart(as_qring(ring), inverted=tuple(inverted))


# -- structure maps ------------------------------------------------------------


def _primed(names: Sequence[str], idx: int, taken: set[str]) -> str:
    n = names[idx] + "'"
    while n in taken:
        n += "'"
    return n


def chart_names(parent: Ring, center: Sequence[int], cover: int) -> tuple[str, ...]:
    """Cover variable keeps its name, other center variables gain a prime."""
    names = list(parent.names)
    out = list(names)
    taken = set(names)
    for j in center:
        if j != cover:
            out[j] = _primed(names, j, taken)
            taken.add(out[j])
    return tuple(out)


def _affine_images(
    parent: Ring, images: list[Poly], point: Sequence[int] | None, Qinv: Sequence[Sequence[int]] | None
) -> list[Poly]:
    """Parent variable j maps to point_j + sum_k Qinv[j][k] * images[k]."""
    n = parent.nvars
    if Qinv is not None:
        out = []
        for j in range(n):
            acc = images[0].ring.zero()
            for k in range(n):
                a = Qinv[j][k] % parent.p
                if a:
                    acc = acc + images[k].scale(a)
            out.append(acc)
    else:
        out = list(images)
    if point is not None:
        out = [f + int(a) for f, a in zip(out, point)]
    return out


def _lift_action(act: CyclicAction, centers: dict[int, int], cover: int) -> CyclicAction:
    """Transport a parent cyclic action to a weighted chart with the given cover index."""
    di = centers[cover]
    w = act.weights
    new = []
    for j in range(len(w)):
        if j == cover:
            new.append(w[cover])
        elif j in centers:
            new.append(di * w[j] - centers[j] * w[cover])
        else:
            new.append(di * w[j])
    return CyclicAction(act.order * di, tuple(new))


def _permuted_action(act: CyclicAction, Qinv: Sequence[Sequence[int]]) -> CyclicAction:
    """Action weights in new coordinates X where x = Qinv X with Qinv monomial."""
    n = len(Qinv)
    new = [0] * n
    for j in range(n):
        ks = [k for k in range(n) if Qinv[j][k]]
        if len(ks) != 1:
            raise UnsupportedInput("coordinate change does not respect the chart's group action")
        new[ks[0]] = act.weights[j]
    return CyclicAction(act.order, tuple(new))


def make_blowup_charts(
    chart: Chart,
    centers: Sequence[tuple[int, int]],
    point: Sequence[int] | None = None,
    Qinv: Sequence[Sequence[int]] | None = None,
    inverted_extra: Sequence[Poly] = (),
    kind: str = "blowup",
) -> list[Chart]:
    """Charts D_+(x_i) of the (weighted) blow-up of sum (X_i, d_i).

    Coordinates X are related to the parent variables by x = point + Qinv X.
    Charts on which the strict transform of the relations is the unit ideal
    are dropped.
    """
    parent = chart.poly_ring
    n = parent.nvars
    if not centers:
        raise ValueError("empty center")
    cmap = {}
    for i, d in centers:
        if not (0 <= i < n):
            raise ValueError(f"center variable {i} out of range")
        if i in cmap:
            raise ValueError(f"center variable {i} repeated")
        if d < 1:
            raise ValueError("weights must be positive")
        cmap[i] = d
    acts = chart.actions
    if Qinv is not None and acts:
        if point is not None and any(point):
            raise UnsupportedInput("cannot translate on a chart with a group action")
        acts = tuple(_permuted_action(a, Qinv) for a in acts)
    elif point is not None and any(point) and any(a.order > 1 for a in acts):
        raise UnsupportedInput("cannot translate on a chart with a group action")
    out = []
    for cover, dcov in centers:
        names = chart_names(parent, list(cmap), cover)
        R = Ring(names, parent.p)
        y = R.gens()
        imgs = []
        for j in range(n):
            if j == cover:
                imgs.append(y[j] ** dcov)
            elif j in cmap:
                imgs.append(y[cover] ** cmap[j] * y[j])
            else:
                imgs.append(y[j])
        to_parent = _affine_images(parent, imgs, point, Qinv)
        exc = y[cover]
        rels = []
        if not chart.ring.relations.is_zero():
            sub = Ideal(R, [g.subs(to_parent, R) for g in chart.ring.relations.generators])
            st = saturation(sub, exc)
            if st.is_unit():
                continue
            rels = st.groebner()
        inv = []
        for h in list(chart.inverted) + list(inverted_extra):
            hh = h.subs(to_parent, R)
            if not hh.is_constant():
                inv.append(hh)
        new_acts = [_lift_action(a, cmap, cover) for a in acts]
        if dcov > 1:
            w = [0] * n
            w[cover] = 1
            for j, d in cmap.items():
                if j != cover:
                    w[j] = -d
            new_acts.append(CyclicAction(dcov, tuple(w)))
        new_acts = [a for a in new_acts if a.order > 1]
        out.append(
            Chart(
                QuotientRing(R, rels),
                tuple(to_parent),
                exc,
                tuple(new_acts),
                tuple(inv),
                kind,
                tuple(parent.names[i] for i, _ in centers),
                tuple(d for _, d in centers),
                cover,
            )
        )
    return out


def blowup_coordinate_center(
    chart: Chart,
    center: Sequence[int | str],
    point: Sequence[int] | None = None,
    Qinv: Sequence[Sequence[int]] | None = None,
    inverted_extra: Sequence[Poly] = (),
) -> list[Chart]:
    """Charts of the ordinary blow-up along the coordinate center V(x_i : i in center)."""
    if not center:
        raise ValueError("empty center")
    idx = [chart.poly_ring.index(c) if isinstance(c, str) else c for c in center]
    return make_blowup_charts(chart, [(i, 1) for i in idx], point, Qinv, inverted_extra, "blowup")


def coordinate_change_chart(chart: Chart, point: Sequence[int], Qinv: Sequence[Sequence[int]] | None = None) -> Chart:
    """The isomorphism x = point + Qinv X as a chart (used by tests and oracles)."""
    parent = chart.poly_ring
    R = Ring(parent.names, parent.p)
    to_parent = _affine_images(parent, R.gens(), point, Qinv)
    rels = []
    if not chart.ring.relations.is_zero():
        rels = [g.subs(to_parent, R) for g in chart.ring.relations.generators]
    inv = [h.subs(to_parent, R) for h in chart.inverted]
    return Chart(QuotientRing(R, rels), tuple(to_parent), R.one(), (), tuple(inv), "change")


def strict_transform(I: Ideal, chart: Chart) -> Ideal:
    R = chart.poly_ring
    sub = Ideal(R, [g.subs(list(chart.to_parent), R) for g in I.generators])
    if chart.exceptional is None or chart.exceptional.is_constant():
        return sub
    return saturation(sub, chart.exceptional)


# -- linear elimination -----------------------------------------------------------


def eliminate_linear(chart: Chart) -> Chart | None:
    """Drop a variable appearing in a relation as c*x_k + g with c a nonzero constant.

    Returns the isomorphic chart on the smaller ring, or None if no relation has
    that shape.
    """
    Q = chart.ring
    if Q.relations.is_zero():
        return None
    amb = Q.ambient
    for r in Q.relations.groebner():
        for k in range(amb.nvars):
            if r.degree_in(k) != 1:
                continue
            lin = [(e, c) for e, c in r.terms.items() if e[k]]
            if len(lin) != 1 or sum(lin[0][0]) != 1:
                continue
            c = lin[0][1]
            e_k = lin[0][0]
            rest = Poly(amb, {e: v for e, v in r.terms.items() if e != e_k})
            if rest.degree_in(k) > 0:
                continue
            keep = [j for j in range(amb.nvars) if j != k]
            R = Ring(tuple(amb.names[j] for j in keep), amb.p)
            pos = {j: t for t, j in enumerate(keep)}
            solved = (-rest).scale(inv_mod(c, amb.p))
            imgs = []
            for j in range(amb.nvars):
                if j == k:
                    imgs.append(solved.change_ring(R, [pos.get(i, 0) for i in range(amb.nvars)]))
                else:
                    imgs.append(R.var(pos[j]))
            others = []
            for g in Q.relations.groebner():
                if g == r:
                    continue
                gg = g.subs(imgs, R)
                if not gg.is_zero():
                    others.append(gg)
            inv = [h.subs(imgs, R) for h in chart.inverted]
            acts = tuple(CyclicAction(a.order, tuple(a.weights[j] for j in keep)) for a in chart.actions)
            return Chart(
                QuotientRing(R, others), tuple(imgs), R.one(), acts, tuple(inv), "eliminate", eliminated=k
            )
    return None


# -- pullback ---------------------------------------------------------------------


def _adjugate(J: list[list[Poly]], zero: Poly) -> list[list[Poly]]:
    n = len(J)
    if n == 1:
        return [[zero + 1]]
    adj = [[zero] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [row[:j] + row[j + 1 :] for k, row in enumerate(J) if k != i]
            c = _det(minor, zero)
            adj[j][i] = c if (i + j) % 2 == 0 else -c
    return adj


def _power_of_var(f: Poly) -> tuple[int, int, int] | None:
    """If f = c * y_v^k return (c, v, k); constants give v = -1."""
    if len(f.terms) != 1:
        return None
    (e, c), = f.terms.items()
    nz = [i for i, k in enumerate(e) if k]
    if not nz:
        return c, -1, 0
    if len(nz) > 1:
        return None
    return c, nz[0], e[nz[0]]


@dataclass
class Pullback:
    derivation: Derivation
    # the pullback equals derivation / exceptional^cleared
    cleared: int = 0


def pullback_derivation(D: Derivation, chart: Chart, clear_multiple: int = 1) -> Pullback:
    """Pull D back to the chart, clearing denominators by the exceptional variable.

    The number of cleared powers is rounded up to a multiple of ``clear_multiple``
    (weighted charts use the group order so that invariance is preserved).
    """
    R = chart.poly_ring
    phi = list(chart.to_parent)
    if chart.kind == "eliminate":
        k = chart.eliminated
        coeffs = [c.subs(phi, R) for j, c in enumerate(D.coeffs) if j != k]
        return Pullback(Derivation(chart.ring, coeffs), 0)
    n = R.nvars
    if len(phi) != n or D.poly_ring.nvars != n:
        raise StructuralError("structure map is not square; cannot pull back")
    J = [[phi[i].diff(j) for j in range(n)] for i in range(n)]
    zero = R.zero()
    det = _det(J, zero)
    if det.is_zero():
        raise StructuralError("structure map has vanishing Jacobian determinant")
    pw = _power_of_var(det)
    if pw is None:
        raise StructuralError(f"Jacobian determinant {det} is not a monomial in one variable")
    kappa, v, k = pw
    if v >= 0 and chart.exceptional is not None and not chart.exceptional.is_constant():
        exc_pw = _power_of_var(chart.exceptional)
        if exc_pw is None or exc_pw[1] != v:
            raise StructuralError("Jacobian determinant is not a power of the exceptional variable")
    target = [c.subs(phi, R) for c in D.coeffs]
    adj = _adjugate(J, zero)
    numer = []
    for j in range(n):
        acc = zero
        for i in range(n):
            if not adj[j][i].is_zero() and not target[i].is_zero():
                acc = acc + adj[j][i] * target[i]
        numer.append(acc)
    kinv = inv_mod(kappa, R.p)
    if k == 0:
        coeffs = [f.scale(kinv) for f in numer]
        return Pullback(Derivation(chart.ring, coeffs), 0)
    yv = R.var(v)
    # divisibility of each numerator by y_v
    deficits = []
    for f in numer:
        a = 0
        g = f
        while a < k and not g.is_zero():
            q = exact_divide(g, yv)
            if q is None:
                break
            g, a = q, a + 1
        deficits.append(k - a if not f.is_zero() else 0)
    need = max(deficits)
    m = clear_multiple
    need = -(-need // m) * m
    coeffs = []
    for f in numer:
        if f.is_zero():
            coeffs.append(zero)
            continue
        if need >= k:
            g = f * yv ** (need - k)
        else:
            g = exact_divide(f, yv ** (k - need))
            if g is None:  # pragma: no cover - excluded by the deficit computation
                raise StructuralError("pullback is not polynomial after clearing")
        coeffs.append(g.scale(kinv))
    return Pullback(Derivation(chart.ring, coeffs), need)


def pullback_presentation(F: FoliationPresentation, chart: Chart, clear_multiple: int = 1) -> FoliationPresentation:
    return FoliationPresentation(
        [pullback_derivation(g, chart, clear_multiple).derivation for g in F.generators], F.declared_rank
    )


def check_pullback(D: Derivation, chart: Chart, pb: Pullback, tests: Sequence[Poly]) -> bool:
    """D'(phi(f)) == exc^cleared * phi(D(f)) for every test polynomial f."""
    R = chart.poly_ring
    phi = list(chart.to_parent)
    scale = chart.exceptional ** pb.cleared if pb.cleared else R.one()
    for f in tests:
        lhs = pb.derivation(f.subs(phi, R))
        rhs = chart.ring.reduce(scale * D(f).subs(phi, R))
        if not chart.ring.equal(lhs, rhs):
            return False
    return True


# -- history tree ---------------------------------------------------------------


@dataclass
class TreeNode:
    id: int
    chart: Chart
    parent: int | None
    label: dict = field(default_factory=dict)
    presentation: FoliationPresentation | None = None
    saturated: FoliationPresentation | None = None
    children: list[int] = field(default_factory=list)
    regular: bool | None = None
    invariant: bool | None = None


class BlowUpTree:
    def __init__(self, root: Chart, presentation: FoliationPresentation | None = None):
        self.nodes: list[TreeNode] = [TreeNode(0, root, None, {"op": "root"}, presentation, presentation)]

    @property
    def root(self) -> TreeNode:
        return self.nodes[0]

    def add(self, parent: int, chart: Chart, label: dict, presentation=None, saturated=None) -> TreeNode:
        node = TreeNode(len(self.nodes), chart, parent, label, presentation, saturated)
        self.nodes.append(node)
        self.nodes[parent].children.append(node.id)
        return node

    def leaves(self) -> list[TreeNode]:
        return [n for n in self.nodes if not n.children]

    def depth(self, node_id: int | None = None, blowups_only: bool = True) -> int:
        if node_id is None:
            return max((self.depth(n.id, blowups_only) for n in self.nodes), default=0)
        d = 0
        n = self.nodes[node_id]
        while n.parent is not None:
            if not blowups_only or n.chart.kind in ("blowup", "weighted"):
                d += 1
            n = self.nodes[n.parent]
        return d

    def path(self, node_id: int) -> list[TreeNode]:
        out = []
        n = self.nodes[node_id]
        while n is not None:
            out.append(n)
            n = self.nodes[n.parent] if n.parent is not None else None
        return out[::-1]

    def composite_map(self, node_id: int) -> list[Poly]:
        """Images of the root variables in the given node's ring."""
        path = self.path(node_id)
        cur = None
        for n in path[1:]:
            tp = list(n.chart.to_parent)
            cur = tp if cur is None else [g.subs(tp, n.chart.poly_ring) for g in cur]
        return cur if cur is not None else path[0].chart.poly_ring.gens()
