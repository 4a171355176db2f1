"""Buchberger's algorithm over F_p for ideals and submodules of free modules.

Internally an element is a dict mapping ``(position, exponent)`` to a residue;
ideals live entirely in position 0.  Module orders are position-over-term with
lower positions larger, which is what the lifting trick in
:func:`module_membership` relies on.
"""

from __future__ import annotations

import heapq
from typing import Callable, Sequence

from .poly import Poly, Ring, inv_mod

ExpKey = Callable[[tuple[int, ...]], tuple]


def grevlex_key(e: tuple[int, ...]) -> tuple:
    return (sum(e), tuple(-x for x in reversed(e)))


def lex_key(e: tuple[int, ...]) -> tuple:
    return e


def elimination_key(k: int) -> ExpKey:
    """Block order: grevlex on the first k variables, then grevlex on the rest."""

    def key(e: tuple[int, ...]) -> tuple:
        return (grevlex_key(e[:k]), grevlex_key(e[k:]))

    return key


ORDERS: dict[str, ExpKey] = {"grevlex": grevlex_key, "lex": lex_key}


def order_key(order: str | ExpKey) -> ExpKey:
    if callable(order):
        return order
    try:
        return ORDERS[order]
    except KeyError:
        raise ValueError(f"unknown monomial order {order!r}") from None


# -- generic term machinery ----------------------------------------------------

Term = tuple[int, tuple[int, ...]]


def _divides(a: Term, b: Term) -> bool:
    return a[0] == b[0] and all(x <= y for x, y in zip(a[1], b[1]))


def _shift(f: dict, exp: tuple[int, ...], c: int, p: int) -> dict:
    return {
        (pos, tuple(x + y for x, y in zip(e, exp))): (v * c) % p for (pos, e), v in f.items()
    }


class _Basis:
    """Growing list of monic elements with cached leading terms."""

    def __init__(self, p: int, key: Callable[[Term], tuple]):
        self.p = p
        self.key = key
        self.elems: list[dict] = []
        self.leads: list[Term] = []

    def lead(self, f: dict) -> Term:
        return max(f, key=self.key)

    def monic(self, f: dict) -> dict:
        lt = self.lead(f)
        inv = inv_mod(f[lt], self.p)
        return {t: (c * inv) % self.p for t, c in f.items()}

    def add(self, f: dict) -> int:
        self.elems.append(f)
        self.leads.append(self.lead(f))
        return len(self.elems) - 1

    def reduce(self, f: dict, skip: int | None = None, full: bool = True) -> dict:
        p = self.p
        key = self.key
        f = dict(f)
        rem: dict = {}
        leads = self.leads
        elems = self.elems
        while f:
            t = max(f, key=key)
            c = f[t]
            for idx, lt in enumerate(leads):
                if idx == skip or elems[idx] is None:
                    continue
                if _divides(lt, t):
                    q = tuple(x - y for x, y in zip(t[1], lt[1]))
                    coef = (-c) % p  # elements are monic
                    for (pos, e), v in elems[idx].items():
                        nt = (pos, tuple(a + b for a, b in zip(e, q)))
                        nv = (f.get(nt, 0) + coef * v) % p
                        if nv:
                            f[nt] = nv
                        else:
                            f.pop(nt, None)
                    break
            else:
                rem[t] = c
                del f[t]
                if not full:
                    rem.update(f)
                    return rem
        return rem


def _spoly(f: dict, g: dict, lf: Term, lg: Term, p: int) -> dict:
    lcm = tuple(max(a, b) for a, b in zip(lf[1], lg[1]))
    mf = tuple(a - b for a, b in zip(lcm, lf[1]))
    mg = tuple(a - b for a, b in zip(lcm, lg[1]))
    out = _shift(f, mf, 1, p)
    for t, v in _shift(g, mg, p - 1, p).items():
        nv = (out.get(t, 0) + v) % p
        if nv:
            out[t] = nv
        else:
            out.pop(t, None)
    return out


def buchberger(elems: Sequence[dict], p: int, key: Callable[[Term], tuple]) -> list[dict]:
    """Reduced Groebner basis of the module generated by ``elems``."""
    B = _Basis(p, key)
    for f in elems:
        if f:
            r = B.reduce(f)
            if r:
                B.add(B.monic(r))
    # pending pairs, plus a heap ordered by lcm for the normal selection strategy
    pairs: set[tuple[int, int]] = set()
    heap: list = []

    def push(i, j):
        a, b = B.leads[i], B.leads[j]
        pairs.add((i, j))
        heapq.heappush(heap, (key((a[0], tuple(max(x, y) for x, y in zip(a[1], b[1])))), i, j))

    for j in range(len(B.elems)):
        for i in range(j):
            push(i, j)

    while heap:
        _, i, j = heapq.heappop(heap)
        if (i, j) not in pairs:
            continue
        pairs.discard((i, j))
        fi, fj = B.elems[i], B.elems[j]
        if fi is None or fj is None:
            continue
        li, lj = B.leads[i], B.leads[j]
        if li[0] != lj[0]:
            continue
        # product criterion (only valid for ideals, i.e. single position)
        if li[0] == 0 and _is_ideal_like(B) and all(
            min(a, b) == 0 for a, b in zip(li[1], lj[1])
        ):
            continue
        lcm = (li[0], tuple(max(a, b) for a, b in zip(li[1], lj[1])))
        if _chain_criterion(B, i, j, lcm, pairs):
            continue
        s = _spoly(fi, fj, li, lj, p)
        r = B.reduce(s)
        if r:
            k = B.add(B.monic(r))
            for m in range(k):
                if B.elems[m] is not None:
                    push(m, k)
    return _interreduce(B)


def _is_ideal_like(B: _Basis) -> bool:
    return all(lt[0] == 0 for lt in B.leads)


def _chain_criterion(B: _Basis, i: int, j: int, lcm: Term, pending: set) -> bool:
    for k, lk in enumerate(B.leads):
        if k in (i, j) or B.elems[k] is None:
            continue
        if _divides(lk, lcm):
            a = (min(i, k), max(i, k))
            b = (min(j, k), max(j, k))
            if a not in pending and b not in pending:
                return True
    return False


def _interreduce(B: _Basis) -> list[dict]:
    live = [k for k in range(len(B.elems)) if B.elems[k] is not None]
    # minimal basis: drop elements whose lead is divisible by another lead
    minimal = []
    for k in live:
        lk = B.leads[k]
        dominated = False
        for m in live:
            if m == k:
                continue
            lm = B.leads[m]
            if _divides(lm, lk) and (lm != lk or m < k):
                dominated = True
                break
        if not dominated:
            minimal.append(k)
    R = _Basis(B.p, B.key)
    for k in minimal:
        R.add(B.elems[k])
    out = []
    for idx in range(len(R.elems)):
        r = R.reduce(R.elems[idx], skip=idx)
        out.append(R.monic(r))
    out.sort(key=lambda f: B.key(max(f, key=B.key)), reverse=True)
    return out


# -- ideal front end -------------------------------------------------------------


def _to_internal(f: Poly) -> dict:
    return {(0, e): c for e, c in f.terms.items()}


def _from_internal(ring: Ring, f: dict) -> Poly:
    return Poly._raw(ring, {e: c for (_, e), c in f.items()})


def _ideal_key(order: str | ExpKey) -> Callable[[Term], tuple]:
    k = order_key(order)
    return lambda t: k(t[1])


def groebner_basis(polys: Sequence[Poly], order: str | ExpKey = "grevlex") -> list[Poly]:
    """Reduced Groebner basis (monic, sorted by decreasing leading monomial)."""
    polys = [f for f in polys if not f.is_zero()]
    if not polys:
        return []
    ring = polys[0].ring
    for f in polys:
        if f.ring != ring:
            from .poly import RingMismatch

            raise RingMismatch(f"{f.ring} vs {ring}")
    gb = buchberger([_to_internal(f) for f in polys], ring.p, _ideal_key(order))
    return [_from_internal(ring, g) for g in gb]


def normal_form(f: Poly, basis: Sequence[Poly], order: str | ExpKey = "grevlex") -> Poly:
    """Remainder of ``f`` modulo a Groebner basis (must be monic, same order)."""
    if f.is_zero() or not basis:
        return f
    B = _Basis(f.ring.p, _ideal_key(order))
    for g in basis:
        B.add(_to_internal(g))
    return _from_internal(f.ring, B.reduce(_to_internal(f)))


def divide(f: Poly, g: Poly, order: str | ExpKey = "grevlex") -> tuple[Poly, Poly]:
    """Multivariate division by a single polynomial: f = q*g + r."""
    if g.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    ring = f.ring
    p = ring.p
    key = order_key(order)
    lg = max(g.terms, key=key)
    inv = inv_mod(g.terms[lg], p)
    rem = dict(f.terms)
    q: dict = {}
    r: dict = {}
    gterms = list(g.terms.items())
    while rem:
        t = max(rem, key=key)
        c = rem[t]
        if all(a >= b for a, b in zip(t, lg)):
            m = tuple(a - b for a, b in zip(t, lg))
            coef = c * inv % p
            q[m] = (q.get(m, 0) + coef) % p
            for e, v in gterms:
                ne = tuple(a + b for a, b in zip(e, m))
                nv = (rem.get(ne, 0) - coef * v) % p
                if nv:
                    rem[ne] = nv
                else:
                    rem.pop(ne, None)
        else:
            r[t] = c
            del rem[t]
    return Poly(ring, q), Poly(ring, r)


def exact_divide(f: Poly, g: Poly) -> Poly | None:
    """f / g if g divides f, else None."""
    q, r = divide(f, g)
    return q if r.is_zero() else None


# -- module front end ------------------------------------------------------------


def _vec_to_internal(v: Sequence[Poly], offset: int = 0) -> dict:
    out = {}
    for pos, f in enumerate(v):
        for e, c in f.terms.items():
            out[(pos + offset, e)] = c
    return out


def _pot_key(order: str | ExpKey) -> Callable[[Term], tuple]:
    k = order_key(order)
    return lambda t: (-t[0], k(t[1]))


def module_groebner_basis(
    vectors: Sequence[Sequence[Poly]], order: str | ExpKey = "grevlex"
) -> list[list[Poly]]:
    """Reduced Groebner basis of a submodule of R^r (position over term)."""
    vectors = [list(v) for v in vectors]
    if not vectors:
        return []
    ring = vectors[0][0].ring
    rank = len(vectors[0])
    gb = buchberger([_vec_to_internal(v) for v in vectors], ring.p, _pot_key(order))
    out = []
    for g in gb:
        vec = [dict() for _ in range(rank)]
        for (pos, e), c in g.items():
            vec[pos][e] = c
        out.append([Poly._raw(ring, d) for d in vec])
    return out


def module_membership(
    v: Sequence[Poly],
    gens: Sequence[Sequence[Poly]],
    relations: Sequence[Poly] = (),
    order: str | ExpKey = "grevlex",
) -> list[Poly] | None:
    """Coefficients c with v = sum c_i gens_i (mod relations), or None.

    Uses the augmented module generated by (g_i, e_i) under a position-over-term
    order in which the first r positions dominate; the remainder of (v, 0) is
    (0, -c) exactly when v lies in the submodule.
    """
    v = list(v)
    rank = len(v)
    if any(len(g) != rank for g in gens):
        raise ValueError("all vectors must have the same length")
    ring = v[0].ring if v else None
    if ring is None:
        return []
    k = len(gens)
    p = ring.p
    elems = []
    for i, g in enumerate(gens):
        d = _vec_to_internal(g)
        for e, c in ring.one().terms.items():
            d[(rank + i, e)] = c
        elems.append(d)
    for rel in relations:
        if rel.is_zero():
            continue
        for pos in range(rank):
            elems.append({(pos, e): c for e, c in rel.terms.items()})
    if not any(elems):
        return [ring.zero()] * k if all(f.is_zero() for f in v) else None
    key = _pot_key(order)
    gb = buchberger([e for e in elems if e], p, key)
    B = _Basis(p, key)
    for g in gb:
        B.add(g)
    r = B.reduce(_vec_to_internal(v))
    if any(pos < rank for (pos, _) in r):
        return None
    coeffs = [dict() for _ in range(k)]
    for (pos, e), c in r.items():
        coeffs[pos - rank][e] = (-c) % p
    return [Poly._raw(ring, d) for d in coeffs]
