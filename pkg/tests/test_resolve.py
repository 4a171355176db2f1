import copy

import pytest

from folres.algebra import QuotientRing, Ring
from folres.blowup import root_chart
from folres.derivations import Derivation, FoliationPresentation
from folres.resolve import (
    ABORTED,
    RESOLVED,
    coordinate_components,
    resolve_char2,
    resolve_surface,
    resolve_threefold_corank1,
    verify_resolution,
)
from folres.algebra import Ideal


def surface(p, lam):
    R = Ring(("x", "y"), p)
    return FoliationPresentation([Derivation.diagonal(R, [1, lam])])


def saturated_of(report, node_id):
    return [str(g) for g in report.tree.nodes[node_id].saturated]


def test_surface_weighted_example():
    rep = resolve_surface(surface(5, 3))
    assert rep.status == RESOLVED and rep.depth() == 1
    (step,) = rep.steps
    assert step["weights"] == [1, 3] and step["op"] == "weighted"
    leaves = {rep.tree.nodes[l.node_id].label["cover"]: [str(g) for g in l.saturated] for l in rep.leaves}
    assert leaves == {"x": ["d/dx"], "y": ["d/dy"]}
    assert verify_resolution(rep) == (True, [])


def test_surface_char2_ordinary():
    rep = resolve_surface(surface(2, 1))
    assert rep.status == RESOLVED and rep.depth() == 1
    assert not rep.uses_stacky_charts()
    assert sorted(str(l.saturated) for l in rep.leaves) == ["<d/dx>", "<d/dy>"]


def test_surface_minus_one_goes_through_ordinary_blowup():
    rep = resolve_surface(surface(3, 2))
    assert rep.status == RESOLVED and rep.depth() == 2
    assert rep.steps[0]["weights"] == [1, 1]
    assert all(st["classification"]["lambda_is_minus_one"] is False for st in rep.steps[1:])
    assert verify_resolution(rep)[0]


def test_surface_aborts_on_unknown_point():
    R = Ring(("x", "y"), 3)
    # nilpotent linear part with an isolated zero
    rep = resolve_surface(FoliationPresentation([Derivation(R, ["y", "x^2"])]))
    assert rep.status == ABORTED
    ok, diags = verify_resolution(rep)
    assert not ok and ABORTED in diags[0]


def test_surface_two_singular_points_need_exact_coordinates():
    R = Ring(("x", "y"), 5)
    # singular at (0, 0) and (1, 0), but x(x - 1) is not linear at either point
    D = Derivation(R, ["x*(x - 1)", "3*y"])
    rep = resolve_surface(FoliationPresentation([D]))
    assert rep.status == ABORTED and "Unknown" in rep.diagnostic


def test_char2_t2_uv():
    R = Ring(("u", "v", "w", "t"), 2)
    Q = QuotientRing(R, ["t^2 + u*v"])
    F = FoliationPresentation([Derivation(Q, ["0", "0", "0", "t"])])
    rep = resolve_char2(F)
    assert rep.status == RESOLVED and not rep.uses_stacky_charts()
    assert verify_resolution(rep)[0]


def test_char2_smooth_point():
    R = Ring(("x", "y", "z"), 2)
    rep = resolve_char2(FoliationPresentation([Derivation.diagonal(R, [1, 1, 1])]))
    assert rep.status == RESOLVED and rep.depth() == 1
    assert len(rep.leaves) == 3 and all(l.regular for l in rep.leaves)


def test_char2_rejects_odd_characteristic():
    assert resolve_char2(surface(3, 1)).status == ABORTED


def test_threefold_examples():
    R = Ring(("x", "y", "z"), 5)
    F = FoliationPresentation([Derivation.diagonal(R, [1, 3, 0]), Derivation.diagonal(R, [1, 0, 4])])
    rep = resolve_threefold_corank1(F)
    assert rep.status == RESOLVED and rep.depth() == 2
    assert rep.steps[0]["weights"] == [1, 4, 2]
    assert verify_resolution(rep) == (True, [])

    G = FoliationPresentation([Derivation.partial(R, 2), Derivation.diagonal(R, [1, 3, 0])])
    rep2 = resolve_threefold_corank1(G)
    assert rep2.status == RESOLVED and rep2.depth() == 1
    assert rep2.steps[0]["weights"] == [1, 3]
    for leaf in rep2.leaves:
        assert leaf.regular and leaf.invariant
        assert any(str(g) == "d/dz" for g in leaf.saturated)

    rep3 = resolve_threefold_corank1(FoliationPresentation([Derivation.partial(R, 0)]))
    assert rep3.status == RESOLVED and rep3.steps == [] and len(rep3.tree.nodes) == 1


def test_threefold_needs_odd_p():
    R = Ring(("x", "y", "z"), 2)
    rep = resolve_threefold_corank1(FoliationPresentation([Derivation.partial(R, 0)]))
    assert rep.status == ABORTED


def test_verify_detects_corrupted_leaf():
    rep = resolve_surface(surface(5, 3))
    bad = copy.copy(rep)
    bad.leaves = list(rep.leaves)
    leaf = copy.copy(bad.leaves[0])
    S = leaf.saturated.poly_ring
    leaf.saturated = FoliationPresentation([Derivation(S, [S.var(0), S.zero()])])
    bad.leaves[0] = leaf
    ok, diags = verify_resolution(bad)
    assert not ok
    assert any(d.startswith(f"leaf {leaf.node_id}") for d in diags)


def test_coordinate_components():
    R = Ring(("x", "y", "z"), 2)
    x, y, z = R.gens()
    comps = coordinate_components(Ideal(R, [x * y, x * z]), root_chart(R))
    assert sorted(comps) == [(0,), (1, 2)]
    assert coordinate_components(Ideal(R, [x + y + 1]), root_chart(R)) is None


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_rerun_on_leaves_is_identity(p):
    for lam in range(1, p):
        rep = resolve_surface(surface(p, lam))
        for leaf in rep.leaves:
            node = rep.tree.nodes[leaf.node_id]
            again = resolve_surface(leaf.presentation, chart=node.chart)
            assert again.status == RESOLVED and again.steps == []


def test_report_serializes():
    import json

    rep = resolve_surface(surface(5, 3))
    d = json.loads(json.dumps(rep.to_dict()))
    assert d["status"] == RESOLVED and len(d["nodes"]) == 3
    assert d["steps"][0]["lambda_min"] == 2
