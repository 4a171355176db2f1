"""Multivariate gcd over F_p by recursive content and primitive remainder sequences."""

from __future__ import annotations

from functools import reduce
from typing import Iterable

from .groebner import exact_divide, grevlex_key
from .poly import Poly, inv_mod


def make_monic(f: Poly) -> Poly:
    if f.is_zero():
        return f
    lead = max(f.terms, key=grevlex_key)
    return f.scale(inv_mod(f.terms[lead], f.ring.p))


def monomial_content(f: Poly) -> tuple[int, ...]:
    """Componentwise minimum of the exponents (the largest monomial dividing f)."""
    if f.is_zero():
        return f.ring.zero_exp
    exps = list(f.terms)
    return tuple(min(col) for col in zip(*exps))


def _split(f: Poly, v: int) -> dict[int, Poly]:
    """Coefficients of f as a polynomial in variable v."""
    parts: dict[int, dict] = {}
    for e, c in f.terms.items():
        k = e[v]
        ne = e[:v] + (0,) + e[v + 1 :]
        parts.setdefault(k, {})[ne] = c
    return {k: Poly._raw(f.ring, d) for k, d in parts.items()}


def _xpow(f: Poly, v: int, k: int) -> Poly:
    e = [0] * f.ring.nvars
    e[v] = k
    return f.mul_term(tuple(e), 1)


def content(f: Poly, v: int) -> Poly:
    """gcd of the coefficients of f viewed as a polynomial in variable v."""
    return gcd_many(_split(f, v).values())


def _prem(a: Poly, b: Poly, v: int) -> Poly:
    db = b.degree_in(v)
    lb = _split(b, v)[db]
    r = a
    while not r.is_zero() and r.degree_in(v) >= db:
        dr = r.degree_in(v)
        lr = _split(r, v)[dr]
        r = r * lb - _xpow(lr * b, v, dr - db)
    return r


def _primitive(f: Poly, v: int) -> Poly:
    c = content(f, v)
    if c.is_constant():
        return f
    q = exact_divide(f, c)
    assert q is not None
    return q


def gcd(f: Poly, g: Poly) -> Poly:
    """Monic (grevlex) gcd; gcd(0, 0) = 0."""
    if f.is_zero():
        return make_monic(g)
    if g.is_zero():
        return make_monic(f)
    ring = f.ring
    if f.is_constant() or g.is_constant():
        return ring.one()
    mf, mg = monomial_content(f), monomial_content(g)
    mono = tuple(min(a, b) for a, b in zip(mf, mg))
    if any(mf):
        f = exact_divide(f, ring.monomial(mf))
    if any(mg):
        g = exact_divide(g, ring.monomial(mg))
    return make_monic(_gcd_nomono(f, g).mul_term(mono, 1))


def _gcd_nomono(f: Poly, g: Poly) -> Poly:
    ring = f.ring
    if f.is_constant() or g.is_constant():
        return ring.one()
    if f == g:
        return make_monic(f)
    vars_ = f.variables() | g.variables()
    v = max(vars_)
    if v not in g.variables():
        return gcd(content(f, v), g)
    if v not in f.variables():
        return gcd(f, content(g, v))
    cf, cg = content(f, v), content(g, v)
    c = gcd(cf, cg)
    a = exact_divide(f, cf) if not cf.is_constant() else f
    b = exact_divide(g, cg) if not cg.is_constant() else g
    if a.degree_in(v) < b.degree_in(v):
        a, b = b, a
    while True:
        r = _prem(a, b, v)
        if r.is_zero():
            h = _primitive(b, v)
            return make_monic(c * h)
        if r.degree_in(v) <= 0:
            return make_monic(c)
        a, b = b, _primitive(r, v)


def gcd_many(polys: Iterable[Poly]) -> Poly:
    polys = list(polys)
    if not polys:
        raise ValueError("gcd of an empty family")
    out = reduce(gcd, polys[1:], make_monic(polys[0]))
    return out


def lcm(f: Poly, g: Poly) -> Poly:
    if f.is_zero() or g.is_zero():
        return f.ring.zero()
    q = exact_divide(f * g, gcd(f, g))
    assert q is not None
    return make_monic(q)
