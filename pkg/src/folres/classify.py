"""Point-local analysis of a foliation: linear parts, the multiplicative certificate,
and the smallest-eigenvalue invariant of surface singularities."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

from .algebra import Poly, inv_mod
from .algebra.linalg import charpoly_roots, eigenspace, rank, transpose
from .derivations import Derivation, FoliationPresentation, generic_rank, minors, p_power
from .errors import ClassificationError, UnsupportedInput

REGULAR = "Regular"
MULTIPLICATIVE = "Multiplicative"
UNKNOWN = "Unknown"


@dataclass(frozen=True)
class ClosedPoint:
    coordinates: tuple[int, ...]

    def __iter__(self):
        return iter(self.coordinates)

    def __len__(self):
        return len(self.coordinates)


@dataclass
class LinearPartData:
    matrices: list[list[list[int]]]
    basepoint: tuple[int, ...]
    # generators whose value at the basepoint is nonzero
    nonvanishing: list[bool]


@dataclass
class GeneratorCertificate:
    """Replayable evidence that one generator is diagonal in linear coordinates.

    With X = Q x (x already translated to the basepoint), scale * D satisfies
    (scale * D)(X_k) = eigenvalues[k] * X_k exactly.
    """

    generator: int
    scale: int
    substitution: list[list[int]]
    eigenvalues: tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            "generator": self.generator,
            "scale": self.scale,
            "substitution": self.substitution,
            "eigenvalues": list(self.eigenvalues),
        }


@dataclass
class Classification:
    verdict: str
    point: tuple[int, ...]
    p: int
    certificates: list[GeneratorCertificate] = field(default_factory=list)
    lambda_is_minus_one: bool = False
    reason: str = ""

    @property
    def is_regular(self) -> bool:
        return self.verdict == REGULAR

    @property
    def is_multiplicative(self) -> bool:
        return self.verdict == MULTIPLICATIVE

    @property
    def certificate(self) -> GeneratorCertificate | None:
        return self.certificates[0] if self.certificates else None

    @property
    def eigenvalues(self) -> tuple[int, ...]:
        c = self.certificate
        return c.eigenvalues if c else ()

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "point": list(self.point),
            "certificates": [c.to_dict() for c in self.certificates],
            "lambda_is_minus_one": self.lambda_is_minus_one,
            "reason": self.reason,
        }


def translate_to_origin(F: FoliationPresentation, s: Sequence[int]) -> FoliationPresentation:
    return F.translate(list(s))


def linear_part(F: FoliationPresentation, basepoint: Sequence[int] | None = None) -> LinearPartData:
    """Matrices M with M[i][j] = coefficient of x_j in the linear term of coeffs[i]."""
    n = F.poly_ring.nvars
    if basepoint is not None and any(basepoint):
        F = translate_to_origin(F, basepoint)
    mats = []
    nonvan = []
    for g in F.generators:
        M = []
        for c in g.coeffs:
            row = []
            for j in range(n):
                e = [0] * n
                e[j] = 1
                row.append(c.coeff(tuple(e)))
            M.append(row)
        mats.append(M)
        nonvan.append(any(c.constant_term() for c in g.coeffs))
    return LinearPartData(mats, tuple(basepoint or (0,) * n), nonvan)


def _linear_form(ring, q: Sequence[int]) -> Poly:
    return sum((ring.var(i).scale(a) for i, a in enumerate(q) if a % ring.p), ring.zero())


def certify_generator(D: Derivation, index: int = 0, max_zero: int = 0) -> GeneratorCertificate | str:
    """Certificate for a generator vanishing at the origin, or a reason string."""
    ring = D.poly_ring
    p = ring.p
    n = ring.nvars
    if any(c.constant_term() for c in D.coeffs):
        return "generator does not vanish at the point"
    if p_power(D) != D:
        return "mu_p condition D^[p] = D fails"
    M = [[c.coeff(tuple(int(k == j) for k in range(n))) for j in range(n)] for c in D.coeffs]
    Mt = transpose(M)
    eig = charpoly_roots(Mt, p)
    rows: list[tuple[int, list[int]]] = []
    for lam in eig:
        for v in eigenspace(Mt, lam, p):
            rows.append((lam, v))
    if len(rows) != n or rank([v for _, v in rows], p) != n:
        return "linear part is not diagonalizable over F_p"
    # exact diagonal form in the linear coordinates X = Q x
    for lam, q in rows:
        X = _linear_form(ring, q)
        if D(X) != X.scale(lam):
            return "not diagonal in linear coordinates"
    nonzero = sorted({lam for lam, _ in rows if lam})
    zeros = sum(1 for lam, _ in rows if lam == 0)
    if not nonzero:
        return "nilpotent linear part"
    if zeros > max_zero:
        return "zero eigenvalue"

    e = 1 if 1 in nonzero else nonzero[0]
    return _rescaled(index, rows, inv_mod(e, p), p)


def _rescaled(index: int, rows, c: int, p: int) -> GeneratorCertificate:
    scaled = [(lam * c % p, list(q)) for lam, q in rows]
    # eigenvalue 1 first, then nonzero eigenvalues by lift, zeros last
    scaled.sort(key=lambda t: (t[0] != 1, t[0] == 0, t[0]))
    return GeneratorCertificate(
        generator=index,
        scale=c,
        substitution=[q for _, q in scaled],
        eigenvalues=tuple(lam for lam, _ in scaled),
    )


def adapted_certificate(cert: GeneratorCertificate, p: int) -> GeneratorCertificate:
    """Rescale so that, after the leading 1, the eigenvalues have the smallest lifts.

    For a surface point with eigenvalues {1, lambda} this yields {1, lambda_min}.
    """
    rows = [(lam * inv_mod(cert.scale, p) % p, q) for lam, q in zip(cert.eigenvalues, cert.substitution)]
    nonzero = sorted({lam for lam, _ in rows if lam})

    def key(e):
        c = inv_mod(e, p)
        others = sorted(lam * c % p for lam, _ in rows if lam)
        others.remove(1)
        return tuple(others)

    e = min(nonzero, key=key)
    return _rescaled(cert.generator, rows, inv_mod(e, p), p)


def replay_certificate(D: Derivation, cert: GeneratorCertificate) -> bool:
    """Check that the scaled generator is exactly diagonal in the certificate's coordinates."""
    ring = D.poly_ring
    Ds = D.scale(cert.scale)
    for lam, q in zip(cert.eigenvalues, cert.substitution):
        X = _linear_form(ring, q)
        if Ds(X) != X.scale(lam):
            return False
    return rank(cert.substitution, ring.p) == ring.nvars


def _regular_at_origin(F: FoliationPresentation) -> bool:
    r = generic_rank(F)
    if r == 0:
        return False
    return any(m.constant_term() for m in minors(F.matrix(), r))


def multiplicative_certificate(F: FoliationPresentation, s: Sequence[int] | None = None) -> Classification:
    if not F.ring.is_polynomial_ring():
        raise UnsupportedInput("classification needs a polynomial ring")
    n = F.poly_ring.nvars
    p = F.poly_ring.p
    s = tuple(int(a) % p for a in (s if s is not None else (0,) * n))
    G = translate_to_origin(F, s) if any(s) else F
    if _regular_at_origin(G):
        return Classification(REGULAR, s, p, reason="some maximal minor is nonzero at the point")
    r = generic_rank(G)
    certs = []
    for idx, g in enumerate(G.generators):
        if any(c.constant_term() for c in g.coeffs):
            continue
        # rank one: all eigenvalues nonzero; higher rank allows r - 1 zeros
        res = certify_generator(g, idx, max_zero=r - 1)
        if isinstance(res, str):
            return Classification(UNKNOWN, s, p, reason=f"generator {idx}: {res}")
        certs.append(res)
    if not certs:
        return Classification(UNKNOWN, s, p, reason="no generator vanishes at a singular point")
    nz = [e for e in certs[0].eigenvalues if e]
    minus_one = p > 2 and sorted(nz) == sorted([1, p - 1])
    return Classification(MULTIPLICATIVE, s, p, certs, minus_one)


def lambda_min(F: FoliationPresentation | Classification, s: Sequence[int] | None = None) -> int:
    """Smallest lift among {lambda, 1/lambda}, where {1, lambda} are the nonzero eigenvalues."""
    cl = F if isinstance(F, Classification) else multiplicative_certificate(F, s)
    if not cl.is_multiplicative:
        raise ClassificationError(f"lambda_min needs a multiplicative point, got {cl.verdict}")
    nz = [e for e in cl.eigenvalues if e]
    if len(nz) != 2 or 1 not in nz:
        raise ClassificationError(f"expected nonzero eigenvalues {{1, lambda}}, got {nz}")
    lam = nz[1] if nz[0] == 1 else nz[0]
    return min(lam, inv_mod(lam, cl.p))


def rational_points(polys: Sequence[Poly], inverted: Sequence[Poly] = ()) -> list[tuple[int, ...]]:
    """F_p-points where all polys vanish and no inverted element does (exhaustive)."""
    if not polys:
        raise ValueError("need at least one polynomial")
    ring = polys[0].ring
    pts = []
    for pt in product(range(ring.p), repeat=ring.nvars):
        if all(f.evaluate(pt) == 0 for f in polys) and all(h.evaluate(pt) for h in inverted):
            pts.append(pt)
    return pts
