"""Sparse multivariate polynomials over a prime field F_p."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence


class RingMismatch(ValueError):
    """Raised when two objects over different rings are combined."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def inv_mod(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ZeroDivisionError(f"0 has no inverse mod {p}")
    return pow(a, p - 2, p)


def lift(a: int, p: int) -> int:
    """Representative of ``a`` in {0, ..., p-1}."""
    return a % p


@dataclass(frozen=True)
class Ring:
    """Polynomial ring F_p[names]."""

    names: tuple[str, ...]
    p: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"modulus {self.p} is not prime")
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate variable names in {self.names}")

    @property
    def nvars(self) -> int:
        return len(self.names)

    def gens(self) -> list["Poly"]:
        return [self.var(i) for i in range(self.nvars)]

    def var(self, i: int | str) -> "Poly":
        if isinstance(i, str):
            i = self.index(i)
        e = [0] * self.nvars
        e[i] = 1
        return Poly(self, {tuple(e): 1})

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"no variable {name!r} in {self.names}") from None

    def const(self, c: int) -> "Poly":
        c %= self.p
        return Poly(self, {self.zero_exp: c} if c else {})

    def zero(self) -> "Poly":
        return Poly(self, {})

    def one(self) -> "Poly":
        return self.const(1)

    def monomial(self, exp: Sequence[int], coeff: int = 1) -> "Poly":
        return Poly(self, {tuple(exp): coeff})

    @property
    def zero_exp(self) -> tuple[int, ...]:
        return (0,) * self.nvars

    def __call__(self, value) -> "Poly":
        if isinstance(value, Poly):
            if value.ring != self:
                raise RingMismatch(f"{value.ring} vs {self}")
            return value
        if isinstance(value, int):
            return self.const(value)
        if isinstance(value, str):
            from .parse import parse_poly

            return parse_poly(value, self)
        raise TypeError(f"cannot coerce {type(value).__name__} into {self}")

    def __str__(self):
        return f"F_{self.p}[{', '.join(self.names)}]"


def _add_exp(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(x + y for x, y in zip(a, b))


class Poly:
    """Immutable sparse polynomial: exponent tuple -> nonzero residue."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: Ring, terms: Mapping[tuple[int, ...], int] | None = None):
        p = ring.p
        clean = {}
        if terms:
            n = ring.nvars
            for e, c in terms.items():
                c %= p
                if c:
                    if len(e) != n:
                        raise ValueError(f"exponent {e} has wrong length for {ring}")
                    clean[tuple(e)] = c
        self.ring = ring
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, ring: Ring, terms: dict) -> "Poly":
        # terms already reduced and nonzero
        obj = cls.__new__(cls)
        obj.ring = ring
        obj.terms = terms
        obj._hash = None
        return obj

    # -- basic queries -------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and self.ring.zero_exp in self.terms)

    def constant_term(self) -> int:
        return self.terms.get(self.ring.zero_exp, 0)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self.terms), default=-1)

    def coeff(self, exp: Sequence[int]) -> int:
        return self.terms.get(tuple(exp), 0)

    def monomials(self) -> list[tuple[int, ...]]:
        return list(self.terms)

    def variables(self) -> set[int]:
        return {i for e in self.terms for i, k in enumerate(e) if k}

    def homogeneous_part(self, d: int) -> "Poly":
        return Poly._raw(self.ring, {e: c for e, c in self.terms.items() if sum(e) == d})

    def truncate(self, d: int) -> "Poly":
        """Drop all terms of total degree >= d."""
        return Poly._raw(self.ring, {e: c for e, c in self.terms.items() if sum(e) < d})

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    # -- arithmetic ----------------------------------------------------
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise RingMismatch(f"{self.ring} vs {other.ring}")
            return other
        if isinstance(other, int):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.ring.p
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = (out.get(e, 0) + c) % p
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Poly._raw(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.p
        return Poly._raw(self.ring, {e: (-c) % p for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def scale(self, c: int) -> "Poly":
        p = self.ring.p
        c %= p
        if not c:
            return self.ring.zero()
        return Poly._raw(self.ring, {e: (v * c) % p for e, v in self.terms.items()})

    def mul_term(self, exp: tuple[int, ...], c: int) -> "Poly":
        p = self.ring.p
        c %= p
        if not c:
            return self.ring.zero()
        return Poly._raw(
            self.ring, {_add_exp(e, exp): (v * c) % p for e, v in self.terms.items()}
        )

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.ring.p
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = _add_exp(e1, e2)
                out[e] = (out.get(e, 0) + c1 * c2) % p
        return Poly._raw(self.ring, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative exponent")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    # -- calculus and substitution ---------------------------------------
    def diff(self, i: int) -> "Poly":
        p = self.ring.p
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k % p:
                ne = list(e)
                ne[i] = k - 1
                out[tuple(ne)] = (c * k) % p
        return Poly._raw(self.ring, out)

    def evaluate(self, point: Sequence[int]) -> int:
        p = self.ring.p
        total = 0
        for e, c in self.terms.items():
            t = c
            for x, k in zip(point, e):
                if k:
                    t = t * pow(x, k, p) % p
            total += t
        return total % p

    def subs(self, images: Sequence["Poly"], target: Ring | None = None) -> "Poly":
        """Ring map sending variable i to ``images[i]`` (all in ``target``)."""
        if len(images) != self.ring.nvars:
            raise ValueError("one image per variable required")
        target = target or (images[0].ring if images else self.ring)
        cache: dict[tuple[int, int], Poly] = {}

        def power(i: int, k: int) -> Poly:
            key = (i, k)
            if key not in cache:
                cache[key] = images[i] ** k
            return cache[key]

        result = target.zero()
        for e, c in self.terms.items():
            term = target.const(c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            result = result + term
        return result

    def partial_eval(self, assignments: Mapping[int, int]) -> "Poly":
        """Substitute constants for some variables, staying in the same ring."""
        p = self.ring.p
        out: dict = {}
        for e, c in self.terms.items():
            ne = list(e)
            v = c
            for i, val in assignments.items():
                if ne[i]:
                    v = v * pow(val, ne[i], p) % p
                    ne[i] = 0
            if v:
                t = tuple(ne)
                out[t] = (out.get(t, 0) + v) % p
        return Poly._raw(self.ring, {e: c for e, c in out.items() if c})

    def translate(self, point: Sequence[int]) -> "Poly":
        """f(x + point)."""
        gens = self.ring.gens()
        return self.subs([g + int(a) for g, a in zip(gens, point)], self.ring)

    def change_ring(self, target: Ring, positions: Sequence[int]) -> "Poly":
        """Embed into ``target`` sending variable i to variable positions[i]."""
        out = {}
        n = target.nvars
        for e, c in self.terms.items():
            ne = [0] * n
            for i, k in enumerate(e):
                if k:
                    ne[positions[i]] += k
            ne = tuple(ne)
            out[ne] = (out.get(ne, 0) + c) % target.p
        return Poly._raw(target, {e: c for e, c in out.items() if c})

    # -- display -------------------------------------------------------
    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=lambda e: (-sum(e), [-k for k in e])):
            c = self.terms[e]
            mono = "*".join(
                (n if k == 1 else f"{n}^{k}") for n, k in zip(self.ring.names, e) if k
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts)


def monomial_divides(a: tuple[int, ...], b: tuple[int, ...]) -> bool:
    return all(x <= y for x, y in zip(a, b))


def exp_lcm(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(max(x, y) for x, y in zip(a, b))


def exp_sub(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(x - y for x, y in zip(a, b))


def monomials_of_degree(nvars: int, d: int) -> list[tuple[int, ...]]:
    if nvars == 0:
        return [()] if d == 0 else []
    if nvars == 1:
        return [(d,)]
    return [(k,) + rest for k in range(d, -1, -1) for rest in monomials_of_degree(nvars - 1, d - k)]


def monomials_up_to(nvars: int, degree: int) -> list[tuple[int, ...]]:
    """All exponent vectors of total degree <= degree, graded then lex."""
    return [e for d in range(degree + 1) for e in monomials_of_degree(nvars, d)]


def poly_from_terms(ring: Ring, items: Iterable[tuple[Sequence[int], int]]) -> Poly:
    out: dict = {}
    for e, c in items:
        e = tuple(e)
        out[e] = (out.get(e, 0) + c) % ring.p
    return Poly(ring, out)
