"""Dense linear algebra over F_p on lists of lists of ints."""

from __future__ import annotations

from typing import Sequence

from .poly import inv_mod

Matrix = list[list[int]]


def rref(M: Sequence[Sequence[int]], p: int) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and the pivot columns."""
    A = [[x % p for x in row] for row in M]
    if not A:
        return A, []
    rows, cols = len(A), len(A[0])
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = inv_mod(A[r][c], p)
        A[r] = [x * inv % p for x in A[r]]
        for i in range(rows):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [(x - f * y) % p for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return A, pivots


def rank(M: Sequence[Sequence[int]], p: int) -> int:
    return len(rref(M, p)[1])


def nullspace(M: Sequence[Sequence[int]], p: int, ncols: int | None = None) -> Matrix:
    """Basis of {v : M v = 0}."""
    if not M:
        n = ncols or 0
        return [[1 if i == j else 0 for i in range(n)] for j in range(n)]
    A, pivots = rref(M, p)
    n = len(A[0])
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * n
        v[f] = 1
        for r, c in enumerate(pivots):
            v[c] = (-A[r][f]) % p
        basis.append(v)
    return basis


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]], p: int) -> Matrix:
    return [[sum(a * b for a, b in zip(row, col)) % p for col in zip(*B)] for row in A]


def transpose(A: Sequence[Sequence[int]]) -> Matrix:
    return [list(col) for col in zip(*A)]


def inverse(A: Sequence[Sequence[int]], p: int) -> Matrix | None:
    n = len(A)
    aug = [list(row) + e for row, e in zip(A, identity(n))]
    R, pivots = rref(aug, p)
    if pivots[:n] != list(range(n)):
        return None
    return [row[n:] for row in R]


def det(A: Sequence[Sequence[int]], p: int) -> int:
    A = [[x % p for x in row] for row in A]
    n = len(A)
    d = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if A[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            d = -d
        d = d * A[c][c] % p
        inv = inv_mod(A[c][c], p)
        for i in range(c + 1, n):
            if A[i][c]:
                f = A[i][c] * inv % p
                A[i] = [(x - f * y) % p for x, y in zip(A[i], A[c])]
    return d % p


def charpoly_roots(A: Sequence[Sequence[int]], p: int) -> list[int]:
    """Eigenvalues in F_p (with geometric multiplicity not implied), by root search."""
    n = len(A)
    out = []
    for lam in range(p):
        shifted = [[(A[i][j] - (lam if i == j else 0)) % p for j in range(n)] for i in range(n)]
        if det(shifted, p) == 0:
            out.append(lam)
    return out


def eigenspace(A: Sequence[Sequence[int]], lam: int, p: int) -> Matrix:
    n = len(A)
    shifted = [[(A[i][j] - (lam if i == j else 0)) % p for j in range(n)] for i in range(n)]
    return nullspace(shifted, p, n)
