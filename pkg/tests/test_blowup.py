import random

import pytest
from hypothesis import given, strategies as st

from folres.algebra import Ideal, QuotientRing, Ring
from folres.blowup import (
    BlowUpTree,
    blowup_coordinate_center,
    check_pullback,
    eliminate_linear,
    pullback_derivation,
    root_chart,
    strict_transform,
)
from folres.derivations import Derivation, FoliationPresentation, saturate_rank_one

from helpers import random_poly


def plane(p=5):
    return root_chart(Ring(("x", "y"), p))


def chart_by_cover(charts, name):
    (ch,) = [c for c in charts if c.poly_ring.names[c.cover] == name]
    return ch


def test_plane_x_chart():
    xc = chart_by_cover(blowup_coordinate_center(plane(), [0, 1]), "x")
    R = xc.poly_ring
    x, y1 = R.gens()
    assert R.names == ("x", "y'")
    assert list(xc.to_parent) == [x, x * y1]
    assert xc.exceptional == x


def test_hypersurface_u_chart():
    R = Ring(("u", "v", "w", "t"), 2)
    u, v, w, t = R.gens()
    ch = root_chart(QuotientRing(R, [t**2 - u * v]))
    uc = chart_by_cover(blowup_coordinate_center(ch, ["u", "v", "t"]), "u")
    S = uc.poly_ring
    u_, v1, w_, t1 = S.gens()
    assert list(uc.to_parent) == [u_, u_ * v1, w_, u_ * t1]
    assert uc.ring.relations == Ideal(S, [t1**2 - v1])


def test_three_charts_for_point_in_space():
    ch = root_chart(Ring(("x", "y", "z"), 3))
    assert len(blowup_coordinate_center(ch, [0, 1, 2])) == 3


def test_pullback_rules_on_x_chart():
    xc = chart_by_cover(blowup_coordinate_center(plane(), [0, 1]), "x")
    R0 = Ring(("x", "y"), 5)
    S = xc.poly_ring
    x, y1 = S.gens()
    pb = pullback_derivation(Derivation.diagonal(R0, [1, 0]), xc)
    assert pb.derivation == Derivation(S, [x, -y1])
    assert pullback_derivation(Derivation.diagonal(R0, [0, 1]), xc).derivation == Derivation(S, [0, y1])


def test_char2_surface_pullback_saturates():
    xc = chart_by_cover(blowup_coordinate_center(plane(2), [0, 1]), "x")
    D = pullback_derivation(Derivation.diagonal(Ring(("x", "y"), 2), [1, 1]), xc).derivation
    assert D == Derivation(xc.poly_ring, [xc.poly_ring.var(0), 0])
    assert saturate_rank_one(D) == Derivation.partial(xc.poly_ring, 0)


def test_strict_transforms():
    R = Ring(("u", "v", "w", "t"), 2)
    u, v, w, t = R.gens()
    uc = chart_by_cover(blowup_coordinate_center(root_chart(R), ["u", "v", "t"]), "u")
    S = uc.poly_ring
    _, v1, w_, t1 = S.gens()
    assert strict_transform(Ideal(R, [t**2 - u * v * w]), uc) == Ideal(S, [t1**2 - v1 * w_])
    assert strict_transform(Ideal(R, [t**2 - u * v]), uc) == Ideal(S, [t1**2 - v1])
    assert strict_transform(Ideal(R, [R.one()]), uc).is_unit()


def test_eliminate_linear():
    R = Ring(("u", "v", "t"), 2)
    u, v, t = R.gens()
    ch = root_chart(QuotientRing(R, [t**2 + v]))
    el = eliminate_linear(ch)
    assert el is not None and el.ring.is_polynomial_ring()
    assert R.names[el.eliminated] == "v"
    assert eliminate_linear(root_chart(QuotientRing(R, [t**2 - u * v]))) is None


def test_tree_bookkeeping():
    ch = plane()
    tree = BlowUpTree(ch)
    kids = [tree.add(0, c, {"op": "blowup"}) for c in blowup_coordinate_center(ch, [0, 1])]
    tree.add(kids[0].id, blowup_coordinate_center(kids[0].chart, [0, 1])[0], {"op": "blowup"})
    assert tree.depth() == 2
    assert [n.id for n in tree.leaves()] == [2, 3]
    assert [n.id for n in tree.path(3)] == [0, 1, 3]


def test_bad_center():
    with pytest.raises(ValueError):
        blowup_coordinate_center(plane(), [])
    with pytest.raises(ValueError):
        blowup_coordinate_center(plane(), [0, 0])


# -- properties ------------------------------------------------------------------


def _vanishing_derivation(rng, ring):
    """Random derivation with coefficients in the maximal ideal at the origin."""
    coeffs = []
    for _ in range(ring.nvars):
        f = random_poly(rng, ring, 2, 3)
        coeffs.append(f - f.constant_term())
    return Derivation(ring, coeffs)


@given(st.integers(0, 2**32), st.sampled_from([2, 3, 5]))
def test_pullback_defining_property(s, p):
    rng = random.Random(s)
    R = Ring(("x", "y", "z"), p)
    D = _vanishing_derivation(rng, R)
    tests = [random_poly(rng, R, 3) for _ in range(20)]
    for ch in blowup_coordinate_center(root_chart(R), [0, 1]) + blowup_coordinate_center(root_chart(R), [0, 1, 2]):
        pb = pullback_derivation(D, ch)
        assert check_pullback(D, ch, pb, tests)


@given(st.integers(0, 2**32), st.sampled_from([3, 5]))
def test_chart_gluing(s, p):
    rng = random.Random(s)
    R = Ring(("x", "y"), p)
    D = _vanishing_derivation(rng, R)
    charts = blowup_coordinate_center(root_chart(R), [0, 1])
    xc, yc = chart_by_cover(charts, "x"), chart_by_cover(charts, "y")
    D1 = pullback_derivation(D, xc)
    D2 = pullback_derivation(D, yc)
    assert D1.cleared == D2.cleared == 0
    # on the overlap x = x' y and y' = 1/x'; compare after multiplying by x'^(B+1)
    S = yc.poly_ring
    x1, y = S.gens()
    B = 8
    for a in range(3):
        for b in range(3):
            g = xc.poly_ring.monomial((a, b))
            Lg = (x1 * y) ** a * x1 ** (B - b)
            lhs = x1 * D2.derivation(Lg) - D2.derivation(x1).scale(B) * Lg
            Dg = D1.derivation(g)
            rhs = S.zero()
            for e, c in Dg.terms.items():
                rhs = rhs + (x1 * y) ** e[0] * x1 ** (B + 1 - e[1]) * c
            assert lhs == rhs


@given(st.integers(0, 2**32), st.sampled_from([2, 3, 5]))
def test_composite_pullback(s, p):
    rng = random.Random(s)
    R = Ring(("x", "y"), p)
    D = _vanishing_derivation(rng, R)
    tree = BlowUpTree(root_chart(R))
    A = chart_by_cover(blowup_coordinate_center(tree.root.chart, [0, 1]), "x")
    a = tree.add(0, A, {})
    B = blowup_coordinate_center(A, [0, 1])[0]
    b = tree.add(a.id, B, {})
    DA = pullback_derivation(D, A).derivation
    DB = pullback_derivation(DA, B)
    comp = tree.composite_map(b.id)
    S = B.poly_ring
    scale = B.exceptional ** DB.cleared if DB.cleared else S.one()
    for _ in range(10):
        f = random_poly(rng, R, 3)
        assert DB.derivation(f.subs(comp, S)) == scale * D(f).subs(comp, S)
