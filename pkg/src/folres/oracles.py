"""Brute-force verifiers: constants subrings, Euclid roots, Rees functoriality, lambda constancy.

Everything here is deliberately naive (dense linear algebra on truncated
monomial bases, explicit enumeration) so it can serve as an independent check
on the drivers.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Sequence

from .algebra import Ideal, Poly, Ring, inv_mod, lift
from .algebra.linalg import nullspace, rref
from .algebra.poly import monomials_up_to
from .classify import lambda_min, multiplicative_certificate
from .derivations import Derivation, FoliationPresentation, generic_rank, is_involutive, is_p_closed
from .errors import ClassificationError
from .weighted import ReesAlgebra, rees_containment_witness


# -- constants ------------------------------------------------------------------


@dataclass
class TruncatedBasis:
    """Monomials of degree <= N in graded order, with their column positions."""

    N: int
    monomials: list[tuple[int, ...]]

    @classmethod
    def of(cls, nvars: int, N: int) -> "TruncatedBasis":
        if N < 0:
            raise ValueError("degree bound must be nonnegative")
        return cls(N, monomials_up_to(nvars, N))


def _kernel(gens: Sequence[Derivation], monomials: list[tuple[int, ...]]) -> list[Poly]:
    ring = gens[0].poly_ring
    p = ring.p
    rows: dict[tuple[int, tuple[int, ...]], dict[int, int]] = {}
    for col, e in enumerate(monomials):
        m = ring.monomial(e)
        for gi, D in enumerate(gens):
            for te, c in D(m).terms.items():
                rows.setdefault((gi, te), {})[col] = c
    mat = [[r.get(c, 0) for c in range(len(monomials))] for r in rows.values()]
    kern = nullspace(mat, p, len(monomials))
    if not kern:
        return []
    basis, _ = rref(kern, p)
    out = []
    for v in basis:
        if any(v):
            out.append(Poly(ring, {monomials[i]: a for i, a in enumerate(v) if a}))
    return out


def constants_basis(F: FoliationPresentation, N: int) -> list[Poly]:
    """Basis of {f : deg f <= N, D(f) = 0 for every generator D}."""
    if not F.ring.is_polynomial_ring():
        raise ValueError("constants_basis needs a polynomial ring")
    tb = TruncatedBasis.of(F.poly_ring.nvars, N)
    return _kernel(list(F.generators), tb.monomials)


def in_span(f: Poly, basis: Sequence[Poly]) -> bool:
    """f is an F_p-linear combination of the basis polynomials."""
    if f.is_zero():
        return True
    mons = sorted({e for b in basis for e in b.terms} | set(f.terms))
    p = f.ring.p
    cols = [[b.coeff(e) for e in mons] for b in basis]
    target = [f.coeff(e) for e in mons]
    r0 = len(rref(cols, p)[1]) if cols else 0
    r1 = len(rref(cols + [target], p)[1])
    return r0 == r1


def lattice_monomials(p: int, weights: Sequence[int], N: int) -> list[tuple[int, ...]]:
    """Exponents e with deg e <= N and sum w_i e_i = 0 mod p, enumerated directly."""
    n = len(weights)
    out = []

    def rec(prefix, budget):
        if len(prefix) == n:
            if sum(w * e for w, e in zip(weights, prefix)) % p == 0:
                out.append(tuple(prefix))
            return
        for e in range(budget + 1):
            rec(prefix + [e], budget - e)

    rec([], N)
    return out


# -- Euclid roots ---------------------------------------------------------------------


@dataclass
class EuclidRoot:
    a: int
    b: int
    chain: list[int]
    multipliers: list[int]
    # u = x^s * y^t as a Laurent monomial
    s: int
    t: int
    verified: bool

    def to_dict(self) -> dict:
        return {
            "a": self.a,
            "b": self.b,
            "chain": self.chain,
            "multipliers": self.multipliers,
            "u": {"x": self.s, "y": self.t},
            "verified": self.verified,
        }


def _laurent_identity(ring: Ring, lhs: tuple[int, int], rhs: tuple[int, int], I: Ideal) -> bool:
    """x^lhs == x^rhs modulo I after clearing denominators by a monomial."""
    shift = [max(0, -lhs[k], -rhs[k]) for k in range(2)]
    a = ring.monomial((lhs[0] + shift[0], lhs[1] + shift[1]))
    b = ring.monomial((rhs[0] + shift[0], rhs[1] + shift[1]))
    return I.contains(a - b)


def euclid_root(a: int, b: int, p: int = 5) -> EuclidRoot:
    """u with u^b = x and u^a = y in the normalization of k[x,y]/(x^a - y^b).

    Runs the remainder chain a_0 > a_1 > ... > a_{N+1} = 1 and tracks
    x_{i+1} = x_{i-1} / x_i^{m_i} as exponent vectors in (x, y).
    """
    if a < 1 or b < 1:
        raise ValueError("exponents must be positive")
    if gcd(a, b) != 1:
        raise ValueError(f"exponents {a}, {b} are not coprime")
    ring = Ring(("x", "y"), p)
    x, y = ring.gens()
    I = Ideal(ring, [x**a - y**b])
    if a == b == 1:
        chain, mults, s, t = [1, 1], [], 1, 0
    else:
        # x_1^{a_0} = x_0^{a_1} with a_0 > a_1
        if a > b:
            a0, a1, x0, x1 = a, b, (0, 1), (1, 0)
        else:
            a0, a1, x0, x1 = b, a, (1, 0), (0, 1)
        chain = [a0, a1]
        mults = []
        prev, cur = x0, x1
        while chain[-1] != 1:
            m, r = divmod(chain[-2], chain[-1])
            mults.append(m)
            chain.append(r)
            prev, cur = cur, (prev[0] - m * cur[0], prev[1] - m * cur[1])
        s, t = cur
    ok = _laurent_identity(ring, (s * b, t * b), (1, 0), I) and _laurent_identity(
        ring, (s * a, t * a), (0, 1), I
    )
    return EuclidRoot(a, b, chain, mults, s, t, ok)


# -- constants of the monomial foliations ---------------------------------------


def inv_subring_foliation(n: int, J: Sequence[int], a: Sequence[int], pivot: int, p: int) -> FoliationPresentation:
    """sum_{r not in J} d/dx_r + sum_{j' in J, j' != pivot} (a_j' x_j d/dx_j - a_j x_j' d/dx_j').

    Indices are 0-based; ``a`` is indexed like ``J``.
    """
    J = list(J)
    if not J:
        raise ValueError("J must be nonempty")
    if pivot not in J:
        raise ValueError("pivot must belong to J")
    if len(a) != len(J):
        raise ValueError("one exponent per index of J")
    if any(ai % p == 0 for ai in a):
        raise ValueError("exponents must be coprime to p")
    ring = Ring(tuple(f"x{i + 1}" for i in range(n)), p)
    aj = dict(zip(J, a))
    gens = [Derivation.partial(ring, r) for r in range(n) if r not in J]
    j = pivot
    for jp in J:
        if jp == j:
            continue
        c = [ring.zero()] * n
        c[j] = ring.var(j).scale(aj[jp])
        c[jp] = ring.var(jp).scale(-aj[j])
        gens.append(Derivation(ring, c))
    return FoliationPresentation(gens, n - 1)


def inv_subring_check(n: int, J: Sequence[int], a: Sequence[int], pivot: int, p: int, N: int | None = None) -> bool:
    """Structural checks on the monomial foliation with constants generated by prod x_j^{a_j}.

    Checks generic rank n-1, involutivity, p-closedness, that prod x_j^{a_j}
    and every x_i^p are constants, and that the constants with exponents
    below p span a space of dimension p (the degree-p count of the
    invariant field over the Frobenius image).
    """
    F = inv_subring_foliation(n, J, a, pivot, p)
    ring = F.poly_ring
    if generic_rank(F) != n - 1 or not is_involutive(F) or not is_p_closed(F):
        return False
    aj = dict(zip(J, a))
    mono = ring.monomial(tuple(aj.get(i, 0) for i in range(n)))
    N = max(sum(a), p) if N is None else N
    basis = constants_basis(F, N)
    if not in_span(mono, basis):
        return False
    if not all(in_span(ring.var(i) ** p, basis) for i in range(n)):
        return False
    box = [e for e in _box(n, p)]
    return len(_kernel(list(F.generators), box)) == p


def _box(n: int, p: int):
    if n == 0:
        yield ()
        return
    for rest in _box(n - 1, p):
        for e in range(p):
            yield rest + (e,)


# -- Rees functoriality -------------------------------------------------------------


def _eps(L: int, a: int) -> int:
    return L * (-(-a // L)) - a


def witness_inequalities_hold(L: int, d: int, M: int) -> bool:
    """For all m <= M, i <= m, s <= m-i, t <= ceil(i/L): j = max(0, s+Lt-eps(i)) works.

    "Works" means 0 <= j <= m, m-s-Lt+eps(i) >= m-j and t+ds >= ceil(j/L).
    """
    for m in range(M + 1):
        for i in range(m + 1):
            e = _eps(L, i)
            for s in range(m - i + 1):
                for t in range(-(-i // L) + 1):
                    j = max(0, s + L * t - e)
                    if not 0 <= j <= m:
                        return False
                    if m - s - L * t + e < m - j:
                        return False
                    if t + d * s < -(-j // L):
                        return False
    return True


def rees_functoriality_check(
    p: int,
    Lam: int,
    f: Poly | str | int = 1,
    g: Poly | str | int = 1,
    M: int | None = None,
    u: Poly | str | None = None,
    v: Poly | str | None = None,
    other_weight: int | None = None,
) -> bool:
    """(x,1)+(y,Lam) == (u,1)+(v,Lam) locally at the origin up to degree M.

    By default u = x + y^d f and v = y + x^Lam g with d the lift of 1/Lam,
    and the combinatorial witness inequalities are checked as well.
    Explicit u, v (and optionally a different weight for v) turn this into
    a plain two-sided comparison, used for counterexamples.
    """
    if not 1 <= Lam <= p - 1:
        raise ValueError(f"Lambda must lie in 1..{p - 1}")
    M = 3 * p if M is None else M
    ring = Ring(("x", "y"), p)
    x, y = ring.gens()
    explicit = u is not None or v is not None
    d = lift(inv_mod(Lam, p), p)
    if not explicit:
        u = x + y**d * ring(f)
        v = y + x**Lam * ring(g)
    else:
        u = ring(u if u is not None else "x")
        v = ring(v if v is not None else "y")
    w2 = Lam if other_weight is None else other_weight
    R1 = ReesAlgebra([(x, 1), (y, Lam)])
    R2 = ReesAlgebra([(u, 1), (v, w2)])
    if explicit:
        for lhs, rhs in ((R1, R2), (R2, R1)):
            if rees_containment_witness(lhs, rhs, M, local=True) is not None:
                return False
        return True
    # linear parts are x + [Lam=1] f(0) y and y + [Lam=1] g(0) x
    if Lam == 1 and (1 - ring(f).evaluate((0, 0)) * ring(g).evaluate((0, 0))) % p == 0:
        raise ValueError("u, v are not parameters at the origin")
    for lhs, rhs in ((R2, R1), (R1, R2)):
        if rees_containment_witness(lhs, rhs, M, local=True) is not None:
            return False
    return witness_inequalities_hold(Lam, d, M)


# -- lambda along a singular curve ------------------------------------------------------


def lambda_constancy_check(F: FoliationPresentation | None, points: Sequence) -> bool:
    """{lambda, 1/lambda} agrees at every sample point.

    Each sample is a point of F, or a (presentation, point) pair so that
    pieces of different presentations can be compared.
    """
    seen = None
    for item in points:
        if F is None or (isinstance(item, tuple) and len(item) == 2 and isinstance(item[0], FoliationPresentation)):
            G, pt = item
        else:
            G, pt = F, item
        cl = multiplicative_certificate(G, pt)
        if not cl.is_multiplicative:
            raise ClassificationError(f"sample point {tuple(pt)} is {cl.verdict}: {cl.reason}")
        lm = lambda_min(cl)
        pair = frozenset({lm, inv_mod(lm, cl.p)})
        if seen is None:
            seen = pair
        elif pair != seen:
            return False
    return True


def adapted_parameters(F: FoliationPresentation, point: Sequence[int]) -> tuple[Poly, Poly, int]:
    """(X, Y, Lam): the eigenvalue-1 and eigenvalue-Lam coordinates at the point, in global variables."""
    cl = multiplicative_certificate(F, point)
    if not cl.is_multiplicative:
        raise ClassificationError(f"point {tuple(point)} is {cl.verdict}: {cl.reason}")
    ring = F.poly_ring
    cert = cl.certificate
    forms = []
    for q in cert.substitution[:2]:
        form = ring.zero()
        for k, c in enumerate(q):
            if c:
                form = form + (ring.var(k) - int(point[k])).scale(c)
        forms.append(form)
    return forms[0], forms[1], cert.eigenvalues[1]


def adapted_rees_agreement(F: FoliationPresentation, points: Sequence[Sequence[int]], M: int) -> tuple[int, Poly] | None:
    """Compare (X_s,1)+(Y_s,Lam) across base points; None if all agree up to degree M.

    Returns the first disagreement as (degree, witness).
    """
    base = None
    for pt in points:
        X, Y, L = adapted_parameters(F, pt)
        R = ReesAlgebra([(X, 1), (Y, L)])
        if base is None:
            base = R
            continue
        for lhs, rhs in ((base, R), (R, base)):
            w = rees_containment_witness(lhs, rhs, M)
            if w is not None:
                return w
    return None
