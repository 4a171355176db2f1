import random

from hypothesis import given, strategies as st

from folres.algebra import Ring
from folres.algebra.linalg import inverse
from folres.classify import (
    MULTIPLICATIVE,
    REGULAR,
    UNKNOWN,
    adapted_certificate,
    lambda_min,
    linear_part,
    multiplicative_certificate,
    rational_points,
    replay_certificate,
    translate_to_origin,
)
from folres.derivations import Derivation, FoliationPresentation


def fol(ring, *coeffs):
    return FoliationPresentation([Derivation(ring, list(coeffs))])


def diag_fol(p, *eigs):
    R = Ring(("x", "y", "z")[: len(eigs)], p)
    return FoliationPresentation([Derivation.diagonal(R, eigs)])


def test_translate_to_origin():
    R1 = Ring(("x",), 5)
    F = fol(R1, "x")
    assert str(translate_to_origin(F, (0,))) == str(F)
    assert str(translate_to_origin(fol(R1, "x - 1"), (1,))) == "<x*d/dx>"
    assert str(translate_to_origin(fol(R1, "1"), (3,))) == "<d/dx>"


def test_linear_part():
    assert linear_part(diag_fol(5, 1, 3)).matrices == [[[1, 0], [0, 3]]]
    assert linear_part(diag_fol(2, 1, 1, 1)).matrices == [[[1, 0, 0], [0, 1, 0], [0, 0, 1]]]
    R = Ring(("x", "y"), 5)
    M = linear_part(fol(R, "y", "0")).matrices[0]
    # the x-coefficient is y: nilpotent, one nonzero off-diagonal entry
    assert sorted(sum(M, [])) == [0, 0, 0, 1] and M[0][0] == M[1][1] == 0


def test_certificate_examples():
    cl = multiplicative_certificate(diag_fol(5, 1, 3))
    assert cl.verdict == MULTIPLICATIVE
    assert cl.certificate.scale == 1 and cl.eigenvalues == (1, 3)
    R = Ring(("x", "y"), 5)
    assert multiplicative_certificate(fol(R, "1", "0")).verdict == REGULAR
    R3 = Ring(("x", "y"), 3)
    assert multiplicative_certificate(fol(R3, "y", "0")).verdict == UNKNOWN


def test_lambda_min_examples():
    assert lambda_min(diag_fol(5, 1, 3)) == 2
    assert lambda_min(diag_fol(5, 1, 1)) == 1
    assert lambda_min(diag_fol(3, 1, 2)) == 2
    assert multiplicative_certificate(diag_fol(3, 1, 2)).lambda_is_minus_one


def test_adapted_certificate_orients_lambda_min():
    cl = multiplicative_certificate(diag_fol(5, 1, 3))
    ad = adapted_certificate(cl.certificate, 5)
    assert ad.eigenvalues == (1, 2)


def test_certificate_at_translated_point():
    R = Ring(("x", "y"), 7)
    F = fol(R, "x - 2", "3*(y - 5)")
    cl = multiplicative_certificate(F, (2, 5))
    assert cl.verdict == MULTIPLICATIVE and cl.point == (2, 5)
    assert rational_points([R("x - 2"), R("y - 5")]) == [(2, 5)]


def test_threefold_zero_eigenvalue_allowed_in_rank_two():
    R = Ring(("x", "y", "z"), 5)
    F = FoliationPresentation([Derivation.partial(R, 2), Derivation.diagonal(R, [1, 3, 0])])
    cl = multiplicative_certificate(F)
    assert cl.verdict == MULTIPLICATIVE
    assert sorted(cl.eigenvalues) == [0, 1, 3]


# -- properties -----------------------------------------------------------------


def test_lambda_min_swap_and_scaling_exhaustive():
    for p in (2, 3, 5, 7):
        for lam in range(1, p):
            ref = lambda_min(diag_fol(p, 1, lam))
            for c in range(1, p):
                assert lambda_min(diag_fol(p, c, c * lam % p)) == ref
                assert lambda_min(diag_fol(p, c * lam % p, c)) == ref


def _conjugated(rng, p, eigs):
    n = len(eigs)
    R = Ring(("x", "y", "z")[:n], p)
    while True:
        Q = [[rng.randrange(p) for _ in range(n)] for _ in range(n)]
        Qi = inverse(Q, p)
        if Qi is not None:
            break
    xs = R.gens()
    X = [sum((xs[l].scale(Q[k][l]) for l in range(n)), R.zero()) for k in range(n)]
    coeffs = [sum((X[k].scale(Qi[j][k] * eigs[k]) for k in range(n)), R.zero()) for j in range(n)]
    return Derivation(R, coeffs)


@given(st.integers(0, 2**32), st.sampled_from([3, 5, 7]))
def test_certificate_replays(s, p):
    rng = random.Random(s)
    eigs = [rng.randrange(1, p) for _ in range(2)]
    D = _conjugated(rng, p, eigs)
    cl = multiplicative_certificate(FoliationPresentation([D]))
    assert cl.verdict == MULTIPLICATIVE
    assert replay_certificate(D, cl.certificate)
    assert sorted(cl.eigenvalues) == sorted(e * cl.certificate.scale % p for e in eigs)


@given(st.integers(0, 2**32), st.sampled_from([2, 3, 5]))
def test_nonvanishing_generator_is_regular(s, p):
    rng = random.Random(s)
    R = Ring(("x", "y"), p)
    pt = (rng.randrange(p), rng.randrange(p))
    D = _conjugated(rng, p, [1, rng.randrange(1, p)]) if p > 2 else Derivation.diagonal(R, [1, 1])
    E = Derivation(D.ring, [c + 1 for c in D.coeffs])
    if all(c.evaluate(pt) == 0 for c in E.coeffs):
        return
    assert multiplicative_certificate(FoliationPresentation([E]), pt).verdict == REGULAR
