"""Resolution drivers for surfaces, characteristic-two threefolds and corank-one threefolds.

Each driver grows a :class:`BlowUpTree`.  A node stores the pulled-back
presentation (invariant under the chart's group) and its saturation (used
for classification and regularity).  Children always pull back the
invariant presentation of their parent.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import combinations, permutations, product
from typing import Sequence

from .algebra import Ideal, Poly, inv_mod, lift, radical_contains
from .algebra.linalg import inverse, nullspace, rank, transpose
from .blowup import (
    BlowUpTree,
    Chart,
    TreeNode,
    blowup_coordinate_center,
    eliminate_linear,
    pullback_derivation,
    root_chart,
)
from .classify import lambda_min, linear_part, multiplicative_certificate, rational_points
from .derivations import (
    FoliationPresentation,
    generic_rank,
    is_involutive,
    is_p_closed,
    is_regular,
    is_regular_ambient,
    jacobian_ideal,
    saturate_presentation,
    singular_ideal,
)
from .errors import ClassificationError, EquivarianceError, FolresError, UnsupportedInput
from .oracles import adapted_rees_agreement, lambda_constancy_check
from .weighted import cover_weight, mu_d_invariant, weighted_blowup_charts

log = logging.getLogger(__name__)

RESOLVED = "Resolved"
ABORTED = "Aborted"


class _Abort(Exception):
    pass


@dataclass
class LeafRecord:
    node_id: int
    presentation: FoliationPresentation
    saturated: FoliationPresentation
    regular: bool
    invariant: bool

    def to_dict(self) -> dict:
        return {
            "node": self.node_id,
            "presentation": [str(g) for g in self.presentation],
            "saturated": [str(g) for g in self.saturated],
            "regular": self.regular,
            "invariant": self.invariant,
        }


@dataclass
class ResolutionReport:
    driver: str
    tree: BlowUpTree
    leaves: list[LeafRecord]
    steps: list[dict] = field(default_factory=list)
    status: str = RESOLVED
    diagnostic: str = ""

    @property
    def resolved(self) -> bool:
        return self.status == RESOLVED

    def depth(self) -> int:
        return self.tree.depth()

    def uses_stacky_charts(self) -> bool:
        """Some step created a chart with a nontrivial group."""
        return any(not n.chart.is_schematic() for n in self.tree.nodes)

    def to_dict(self) -> dict:
        nodes = []
        for n in self.tree.nodes:
            ch = n.chart
            nodes.append(
                {
                    "id": n.id,
                    "parent": n.parent,
                    "label": _jsonable(n.label),
                    "ring": ch.summary(),
                    "kind": ch.kind,
                    "to_parent": [str(f) for f in ch.to_parent],
                    "actions": [a.to_dict() for a in ch.actions],
                    "presentation": [str(g) for g in n.presentation] if n.presentation else [],
                    "saturated": [str(g) for g in n.saturated] if n.saturated else [],
                    "regular": n.regular,
                    "invariant": n.invariant,
                    "children": list(n.children),
                }
            )
        return {
            "driver": self.driver,
            "status": self.status,
            "diagnostic": self.diagnostic,
            "depth": self.depth(),
            "steps": _jsonable(self.steps),
            "nodes": nodes,
            "leaves": [leaf.to_dict() for leaf in self.leaves],
        }


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (int, float, str, bool)) or obj is None:
        return obj
    return str(obj)


# -- shared helpers --------------------------------------------------------------


def _saturate(P: FoliationPresentation) -> FoliationPresentation:
    if P.ring.is_polynomial_ring():
        return saturate_presentation(P)
    # on regular quotient charts regularity is checked on P itself
    return P


def _pull(P: FoliationPresentation, chart: Chart) -> FoliationPresentation:
    m = cover_weight(chart)
    return FoliationPresentation(
        [pullback_derivation(g, chart, clear_multiple=m).derivation for g in P.generators], P.declared_rank
    )


def _invariant(P: FoliationPresentation, chart: Chart) -> bool:
    return all(mu_d_invariant(g, chart) for g in P.generators)


def _regular(S: FoliationPresentation, chart: Chart) -> bool:
    return is_regular(S, chart.inverted)


def _singular_points(S: FoliationPresentation, chart: Chart) -> list[tuple[int, ...]]:
    gens = [g for g in singular_ideal(S, chart.inverted).generators if not g.is_zero()]
    if not gens:
        raise _Abort("the foliation is singular everywhere")
    return rational_points(gens, chart.inverted)


def _slots(rows: Sequence[Sequence[int]], p: int) -> tuple[list[list[int]], tuple[int, ...]]:
    """Place each row at a slot where it has a nonzero entry; returns (Q, slot of row k)."""
    n = len(rows)
    for perm in permutations(range(n)):
        if all(rows[k][perm[k]] % p for k in range(n)):
            Q = [[0] * n for _ in range(n)]
            for k in range(n):
                Q[perm[k]] = [a % p for a in rows[k]]
            return Q, perm
    raise _Abort("certificate rows do not form a coordinate system")


def _separating(s: Sequence[int], others: Sequence[Sequence[int]], ring) -> list[Poly]:
    """For each other point, a coordinate hyperplane through it that misses s."""
    out = []
    for t in others:
        k = next(i for i in range(len(s)) if s[i] != t[i])
        out.append(ring.var(k) - int(t[k]))
    return out


def _names(chart: Chart, idx: Sequence[int]) -> list[str]:
    return [chart.poly_ring.names[i] for i in idx]


def coordinate_components(I: Ideal, chart: Chart) -> list[tuple[int, ...]] | None:
    """Maximal coordinate subspaces V(x_T) inside V(I), if they cover V(I) on the chart.

    Components that lie entirely outside the chart's open set are dropped.
    Returns None when V(I) is not a union of coordinate subspaces.
    """
    amb = chart.poly_ring
    n = amb.nvars
    gens = [g for g in I.generators if not g.is_zero()]
    rels = list(chart.ring.relations.generators)
    h = None
    for g in chart.inverted:
        h = g if h is None else h * g
    comps: list[tuple[int, ...]] = []
    for size in range(1, n + 1):
        for T in combinations(range(n), size):
            if any(set(U) <= set(T) for U in comps):
                continue
            zero = [amb.zero() if i in T else amb.var(i) for i in range(n)]
            if not all(g.subs(zero, amb).is_zero() for g in gens):
                continue
            if h is not None and radical_contains(Ideal(amb, [amb.var(i) for i in T] + rels), h):
                continue
            comps.append(T)
    if not comps:
        return None
    seen = set()
    for choice in product(*comps):
        key = tuple(sorted(set(choice)))
        if key in seen:
            continue
        seen.add(key)
        m = amb.one()
        for i in key:
            m = m * amb.var(i)
        if not radical_contains(I, m if h is None else m * h):
            return None
    return comps


class _Run:
    def __init__(self, driver: str, F: FoliationPresentation, max_depth: int, chart: Chart | None):
        self.driver = driver
        self.max_depth = max_depth
        root = chart if chart is not None else root_chart(F.ring)
        self.tree = BlowUpTree(root, F)
        self.steps: list[dict] = []
        self.tree.root.invariant = _invariant(F, root)

    def saturate_root(self):
        self.tree.root.saturated = _saturate(self.tree.root.presentation)

    def check_depth(self, node: TreeNode):
        if self.tree.depth(node.id) >= self.max_depth:
            raise _Abort(f"depth bound {self.max_depth} reached at node {node.id}")

    def expand(self, node: TreeNode, charts: Sequence[Chart], label: dict, evidence: dict | None = None) -> list[TreeNode]:
        kids = []
        for ch in charts:
            P = _pull(node.presentation, ch)
            if not _invariant(P, ch):
                raise EquivarianceError(f"pullback to {ch.summary()} is not invariant")
            S = _saturate(P)
            lab = dict(label)
            if ch.cover is not None:
                lab["cover"] = ch.poly_ring.names[ch.cover]
            kid = self.tree.add(node.id, ch, lab, P, S)
            kid.invariant = True
            kids.append(kid)
        step = {"node": node.id, **label, **(evidence or {}), "children": [k.id for k in kids]}
        self.steps.append(step)
        log.debug("step %s", step)
        return kids

    def finish(self, status: str, diagnostic: str = "") -> ResolutionReport:
        leaves = []
        for node in self.tree.leaves():
            if node.saturated is None:
                node.saturated = node.presentation
            if node.regular is None:
                try:
                    node.regular = _regular(node.saturated, node.chart)
                except UnsupportedInput:
                    node.regular = False
            if node.invariant is None:
                node.invariant = _invariant(node.presentation, node.chart)
            leaves.append(LeafRecord(node.id, node.presentation, node.saturated, node.regular, node.invariant))
        if status == RESOLVED:
            bad = [leaf.node_id for leaf in leaves if not (leaf.regular and leaf.invariant)]
            if bad:
                status, diagnostic = ABORTED, f"leaves {bad} are not regular and invariant"
        return ResolutionReport(self.driver, self.tree, leaves, self.steps, status, diagnostic)


def _drive(run: _Run, step, roots: Sequence[TreeNode] | None = None) -> ResolutionReport:
    """Depth-first expansion with ``step(run, node) -> children``; charts in construction order."""
    try:
        run.saturate_root()
        stack = list(reversed(roots)) if roots is not None else [run.tree.root]
        while stack:
            node = stack.pop()
            stack.extend(reversed(step(run, node)))
    except _Abort as e:
        return run.finish(ABORTED, str(e))
    except (UnsupportedInput, ClassificationError, EquivarianceError) as e:
        return run.finish(ABORTED, f"{type(e).__name__}: {e}")
    return run.finish(RESOLVED)


# -- surfaces ----------------------------------------------------------------------


def _surface_step(run: _Run, node: TreeNode) -> list[TreeNode]:
    S, ch = node.saturated, node.chart
    p = ch.poly_ring.p
    if _regular(S, ch):
        node.regular = True
        return []
    node.regular = False
    run.check_depth(node)
    pts = _singular_points(S, ch)
    if not pts:
        raise _Abort(f"node {node.id}: singular points are not F_{p}-rational")
    kids = []
    for s in pts:
        inv = _separating(s, [t for t in pts if t != s], ch.poly_ring)
        cl = multiplicative_certificate(S, s)
        if not cl.is_multiplicative:
            raise _Abort(f"node {node.id}: point {list(s)} is {cl.verdict} ({cl.reason})")
        evidence = {"classification": cl.to_dict(), "lambda_min": lambda_min(cl)}
        if p == 2 or cl.lambda_is_minus_one:
            charts = blowup_coordinate_center(ch, [0, 1], point=s, inverted_extra=inv)
            label = {"op": "blowup", "center": _names(ch, [0, 1]), "weights": [1, 1], "point": list(s)}
        else:
            cert = cl.certificate
            Lam = cert.eigenvalues[1]
            Q, slot = _slots(cert.substitution, p)
            charts = weighted_blowup_charts(ch, [(slot[0], 1), (slot[1], Lam)], s, inverse(Q, p), inv)
            label = {
                "op": "weighted" if Lam > 1 else "blowup",
                "center": _names(ch, slot[:2]),
                "weights": [1, Lam],
                "point": list(s),
                "substitution": Q,
            }
        kids += run.expand(node, charts, label, evidence)
    return kids


def resolve_surface(F: FoliationPresentation, max_depth: int = 4, chart: Chart | None = None) -> ResolutionReport:
    """Blow up until regular: ordinary blow-ups at lambda = -1 points (and for p = 2),
    weighted (1, Lambda) blow-ups in adapted coordinates elsewhere."""
    run = _Run("surface", F, max_depth, chart)
    amb = F.poly_ring
    if not F.ring.is_polynomial_ring() or amb.nvars != 2:
        return run.finish(ABORTED, "surface driver needs a foliation on F_p[x, y]")
    if generic_rank(F) != 1:
        return run.finish(ABORTED, "surface driver needs a rank-one foliation")
    return _drive(run, _surface_step)


# -- characteristic two -------------------------------------------------------------


def _char2_step(run: _Run, node: TreeNode) -> list[TreeNode]:
    ch = node.chart
    elim = eliminate_linear(ch)
    if elim is not None:
        var = ch.poly_ring.names[elim.eliminated]
        return run.expand(node, [elim], {"op": "eliminate", "variable": var})
    if not is_regular_ambient(ch.ring, ch.inverted):
        run.check_depth(node)
        comps = coordinate_components(jacobian_ideal(ch.ring), ch)
        if not comps:
            raise _Abort(f"node {node.id}: singular locus of {ch.ring} is not a union of coordinate subspaces")
        T = comps[0]
        charts = blowup_coordinate_center(ch, T)
        label = {"op": "blowup", "phase": "ambient", "center": _names(ch, T), "weights": [1] * len(T)}
        return run.expand(node, charts, label, {"components": [_names(ch, c) for c in comps]})
    S = node.saturated
    if _regular(S, ch):
        node.regular = True
        return []
    node.regular = False
    run.check_depth(node)
    if not ch.ring.is_polynomial_ring():
        raise _Abort(f"node {node.id}: singular foliation on the non-polynomial chart {ch.ring}")
    comps = coordinate_components(singular_ideal(S, ch.inverted), ch)
    if not comps:
        raise _Abort(f"node {node.id}: Sing(F) is not a union of coordinate subspaces")
    T = comps[0]
    charts = blowup_coordinate_center(ch, T)
    label = {"op": "blowup", "phase": "foliation", "center": _names(ch, T), "weights": [1] * len(T)}
    return run.expand(node, charts, label, {"components": [_names(ch, c) for c in comps]})


def resolve_char2(F: FoliationPresentation, max_depth: int = 6, chart: Chart | None = None) -> ResolutionReport:
    """Ordinary blow-ups only: first the ambient singular locus, then Sing(F)."""
    run = _Run("char2", F, max_depth, chart)
    Q = F.ring
    if Q.p != 2:
        return run.finish(ABORTED, "char2 driver needs p = 2")
    nrel = len(Q.relations.groebner()) if not Q.relations.is_zero() else 0
    if Q.nvars - nrel > 3:
        return run.finish(ABORTED, "char2 driver handles dimension <= 3")
    if generic_rank(F) != 1:
        return run.finish(ABORTED, "char2 driver needs a rank-one foliation")
    return _drive(run, _char2_step)


# -- corank-one threefolds ---------------------------------------------------------------


def _half(a: int, p: int) -> int:
    """The b in 1..p-1 with 2b = a mod p."""
    return lift(a * inv_mod(2, p) % p, p)


def _combo(W: list[list[int]], fixed: dict[int, int], p: int) -> list[int] | None:
    for cs in product(range(p), repeat=len(W)):
        v = [sum(c * w[k] for c, w in zip(cs, W)) % p for k in range(len(W[0]))]
        if all(v[k] == val for k, val in fixed.items()):
            return v
    return None


def _diagonal_pair_shape(S: FoliationPresentation, s: Sequence[int]):
    """Rows (X, Y, Z) and (lambda, mu) with S = <X dX + lambda Y dY, X dX + mu Z dZ> near s."""
    ring = S.poly_ring
    p, n = ring.p, ring.nvars
    G = S.translate(list(s)) if any(s) else S
    mats = [transpose(M) for M in linear_part(G).matrices]
    basis = []
    for ws in product(range(p), repeat=len(mats)):
        rows = [
            [(Mt[i][j] - (ws[g] if i == j else 0)) % p for j in range(n)] for g, Mt in enumerate(mats) for i in range(n)
        ]
        for v in nullspace(rows, p, n):
            basis.append((ws, v))
    if len(basis) != n or rank([v for _, v in basis], p) != n:
        raise _Abort(f"point {list(s)}: generators are not jointly diagonalizable")
    # try the roles in coordinate order first
    basis.sort(key=lambda t: next(i for i, a in enumerate(t[1]) if a))
    for ws, q in basis:
        X = sum((ring.var(k).scale(c) for k, c in enumerate(q) if c), ring.zero())
        for g, D in enumerate(G.generators):
            if D(X) != X.scale(ws[g]):
                raise _Abort(f"point {list(s)}: generators are not diagonal in linear coordinates")
    W = [[ws[g] for ws, _ in basis] for g in range(len(mats))]
    for k0 in range(n):
        a, b = [i for i in range(n) if i != k0]
        w1 = _combo(W, {k0: 1, b: 0}, p)
        w2 = _combo(W, {k0: 1, a: 0}, p)
        if w1 and w2 and w1[a] and w2[b]:
            return [basis[k0][1], basis[a][1], basis[b][1]], w1[a], w2[b]
    raise _Abort(f"point {list(s)}: not of the form <x dx + l y dy, x dx + m z dz>")


def _vanishes_at(S: FoliationPresentation, s) -> bool:
    return all(c.evaluate(s) == 0 for g in S.generators for c in g.coeffs)


def _point_blowups(run: _Run, node: TreeNode) -> list[TreeNode]:
    S, ch = node.saturated, node.chart
    p = ch.poly_ring.p
    pts = _singular_points(S, ch)
    if not pts:
        raise _Abort(f"node {node.id}: singular points are not F_{p}-rational")
    corners = [s for s in pts if _vanishes_at(S, s)]
    if not corners:
        return [node]
    if len(corners) > 1:
        raise _Abort(f"node {node.id}: several singular points of Sing(F) {corners}; one per chart is supported")
    s = corners[0]
    rows, lam, mu = _diagonal_pair_shape(S, s)
    b, c = _half(lam, p), _half(mu, p)
    Q, slot = _slots(rows, p)
    charts = weighted_blowup_charts(ch, [(slot[0], 1), (slot[1], b), (slot[2], c)], s, inverse(Q, p))
    label = {
        "op": "weighted",
        "phase": "point",
        "center": _names(ch, slot),
        "weights": [1, b, c],
        "point": list(s),
        "substitution": Q,
    }
    kids = run.expand(node, charts, label, {"lambda": lam, "mu": mu})
    for k in kids:
        if _regular(k.saturated, k.chart):
            k.regular = True
            continue
        comps = coordinate_components(singular_ideal(k.saturated, k.chart.inverted), k.chart)
        if not comps or len(comps) != 1 or len(comps[0]) != 2:
            raise _Abort(f"node {k.id}: point blow-up chart is neither regular nor singular along one coordinate curve")
        if any(_vanishes_at(k.saturated, t) for t in _singular_points(k.saturated, k.chart)):
            raise _Abort(f"node {k.id}: point blow-up chart still has a singular point of Sing(F)")
    return kids


def _curve_blowups(run: _Run, node: TreeNode) -> list[TreeNode]:
    S, ch = node.saturated, node.chart
    amb = ch.poly_ring
    p, n = amb.p, amb.nvars
    if _regular(S, ch):
        node.regular = True
        return []
    node.regular = False
    run.check_depth(node)
    comps = coordinate_components(singular_ideal(S, ch.inverted), ch)
    if not comps or len(comps) != 1 or len(comps[0]) != 2:
        raise _Abort(f"node {node.id}: Sing(F) is not a single coordinate curve")
    (free,) = [i for i in range(n) if i not in comps[0]]
    pts = _singular_points(S, ch)
    origin = tuple([0] * n)
    base = origin if origin in pts else pts[0]
    if not lambda_constancy_check(S, pts):
        raise _Abort(f"node {node.id}: {{lambda, 1/lambda}} varies along the singular curve")
    others = [t for t in pts if t != base]
    if others:
        w = adapted_rees_agreement(S, [base, others[0]], p)
        if w is not None:
            raise _Abort(f"node {node.id}: Rees algebras from two base points differ in degree {w[0]} ({w[1]})")
    cl = multiplicative_certificate(S, base)
    cert = cl.certificate
    Lam = cert.eigenvalues[1]
    qX, qY = cert.substitution[0], cert.substitution[1]
    if qX[free] or qY[free]:
        raise _Abort(f"node {node.id}: adapted coordinates involve the curve direction")
    ez = [int(k == free) for k in range(n)]
    Q, slot = _slots([qX, qY, ez], p)
    charts = weighted_blowup_charts(ch, [(slot[0], 1), (slot[1], Lam)], None, inverse(Q, p))
    label = {
        "op": "weighted" if Lam > 1 else "blowup",
        "phase": "curve",
        "center": _names(ch, slot[:2]),
        "weights": [1, Lam],
        "base_point": list(base),
        "substitution": Q,
    }
    evidence = {"classification": cl.to_dict(), "lambda_min": lambda_min(cl), "samples": len(pts)}
    kids = run.expand(node, charts, label, evidence)
    for k in kids:
        k.regular = _regular(k.saturated, k.chart)
        if not k.regular:
            raise _Abort(f"node {k.id}: not regular after the curve blow-up")
    return []


def resolve_threefold_corank1(F: FoliationPresentation, max_depth: int = 4, chart: Chart | None = None) -> ResolutionReport:
    """Two rounds of weighted blow-ups: (1, b, c) at singular points of Sing(F), then
    (1, Lambda) along the remaining singular curves."""
    run = _Run("threefold_corank1", F, max_depth, chart)
    amb = F.poly_ring
    if not F.ring.is_polynomial_ring() or amb.nvars != 3:
        return run.finish(ABORTED, "threefold driver needs a foliation on F_p[x, y, z]")
    if amb.p == 2:
        return run.finish(ABORTED, "threefold weighted driver needs p > 2")

    def step(run: _Run, node: TreeNode) -> list[TreeNode]:
        if node.id == 0:
            if _regular(node.saturated, node.chart):
                node.regular = True
                return []
            if generic_rank(node.saturated) != 2:
                raise _Abort("threefold driver needs a corank-one foliation")
            kids = _point_blowups(run, node)
            if kids == [node]:
                return _curve_blowups(run, node)
            return kids
        return _curve_blowups(run, node)

    return _drive(run, step)


# -- verification -----------------------------------------------------------------------


def _same_module(A: FoliationPresentation, B: FoliationPresentation) -> bool:
    return all(B.contains(g) for g in A.generators) and all(A.contains(g) for g in B.generators)


def verify_resolution(report: ResolutionReport) -> tuple[bool, list[str]]:
    """Recheck every leaf from scratch: closure, saturation, regularity and invariance."""
    if report.status != RESOLVED:
        return False, [f"status {report.status}: {report.diagnostic}"]
    diags = []
    tree_leaves = {n.id for n in report.tree.leaves()}
    if tree_leaves != {leaf.node_id for leaf in report.leaves}:
        diags.append("leaf records do not match the tree")
    for leaf in report.leaves:
        ch = report.tree.nodes[leaf.node_id].chart
        S, P = leaf.saturated, leaf.presentation
        tag = f"leaf {leaf.node_id}"
        try:
            if not is_involutive(S):
                diags.append(f"{tag}: not involutive")
            if not is_p_closed(S):
                diags.append(f"{tag}: not p-closed")
            if ch.ring.is_polynomial_ring() and not _same_module(S, saturate_presentation(S)):
                diags.append(f"{tag}: saturation is not idempotent")
            if not all(S.contains(g) for g in P.generators):
                diags.append(f"{tag}: pulled-back generators are not in the saturation")
            if not is_regular(S, ch.inverted):
                diags.append(f"{tag}: not regular")
            if not all(mu_d_invariant(g, ch) for g in P.generators):
                diags.append(f"{tag}: not invariant under {ch.summary()}")
        except FolresError as e:
            diags.append(f"{tag}: {type(e).__name__}: {e}")
    return not diags, diags
