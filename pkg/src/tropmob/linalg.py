"""Exact linear algebra over Q and Z (lists of Fractions, no numpy)."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

Vec = tuple
Mat = list


def vec(xs) -> tuple:
    return tuple(Fraction(x) for x in xs)


def sub(a, b) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


def add(a, b) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def scale(c, a) -> tuple:
    return tuple(c * x for x in a)


def dot(a, b):
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def matvec(A, x) -> tuple:
    return tuple(dot(row, x) for row in A)


def matmul(A, B) -> list:
    Bt = list(zip(*B))
    return [[dot(row, col) for col in Bt] for row in A]


def transpose(A) -> list:
    return [list(r) for r in zip(*A)]


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot columns."""
    M = [[Fraction(x) for x in r] for r in rows]
    if not M:
        return [], []
    ncols = len(M[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M[:r], pivots


def rank(rows) -> int:
    rows = [r for r in rows]
    if not rows:
        return 0
    return len(rref(rows)[1])


def nullspace(rows, ncols: int | None = None) -> list[tuple]:
    """Rational basis of {x : rows . x = 0}."""
    rows = [list(r) for r in rows]
    if ncols is None:
        if not rows:
            raise ValueError("ncols required for empty matrix")
        ncols = len(rows[0])
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    R, piv = rref(rows)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for i, p in enumerate(piv):
            x[p] = -R[i][f]
        basis.append(tuple(x))
    return basis


def solve(A, b) -> tuple | None:
    """Unique solution of A x = b, or None if singular or inconsistent."""
    n = len(A[0]) if A else 0
    aug = [list(r) + [bi] for r, bi in zip(A, b)]
    R, piv = rref(aug)
    if n in piv:
        return None
    if len(piv) < n:
        return None
    x = [Fraction(0)] * n
    for i, p in enumerate(piv):
        x[p] = R[i][n]
    return tuple(x)


def solve_any(A, b) -> tuple | None:
    """Some solution of A x = b (free variables set to 0), or None."""
    n = len(A[0]) if A else 0
    aug = [list(r) + [bi] for r, bi in zip(A, b)]
    R, piv = rref(aug)
    if n in piv:
        return None
    x = [Fraction(0)] * n
    for i, p in enumerate(piv):
        x[p] = R[i][n]
    return tuple(x)


def det(A) -> Fraction:
    M = [[Fraction(x) for x in r] for r in A]
    n = len(M)
    if n == 0:
        return Fraction(1)
    d = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if M[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            M[c], M[p] = M[p], M[c]
            d = -d
        d *= M[c][c]
        for i in range(c + 1, n):
            if M[i][c] != 0:
                f = M[i][c] / M[c][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[c])]
    return d


def inverse(A) -> list[list[Fraction]]:
    n = len(A)
    aug = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(A)]
    R, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in R]


def primitive(v) -> tuple[int, ...]:
    """Scale a nonzero rational vector to a primitive integer vector (same direction)."""
    v = [Fraction(x) for x in v]
    den = 1
    for x in v:
        den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for k in ints:
        g = math.gcd(g, k)
    if g == 0:
        raise ValueError("zero vector has no primitive direction")
    return tuple(k // g for k in ints)


def integer_kernel(A, ncols: int) -> list[tuple[int, ...]]:
    """Basis of the lattice {x in Z^n : A x = 0} via unimodular column operations."""
    rows = []
    for r in A:
        r = [Fraction(x) for x in r]
        if any(r):
            rows.append(list(primitive(r)))
    n = ncols
    M = [list(r) for r in rows]
    U = [[int(i == j) for j in range(n)] for i in range(n)]  # columns of U track ops

    def colop_swap(i, j):
        for row in M:
            row[i], row[j] = row[j], row[i]
        for row in U:
            row[i], row[j] = row[j], row[i]

    def colop_addmul(dst, src, q):
        # col[dst] -= q * col[src]
        for row in M:
            row[dst] -= q * row[src]
        for row in U:
            row[dst] -= q * row[src]

    c = 0
    for row in M:
        if c >= n:
            break
        while True:
            nz = [j for j in range(c, n) if row[j] != 0]
            if not nz:
                break
            jmin = min(nz, key=lambda j: abs(row[j]))
            if jmin != c:
                colop_swap(c, jmin)
            done = True
            for j in range(c + 1, n):
                if row[j] != 0:
                    colop_addmul(j, c, row[j] // row[c])
                    if row[j] != 0:
                        done = False
            if done:
                break
        if any(row[j] != 0 for j in range(c, n)):
            c += 1
    return [tuple(U[i][j] for i in range(n)) for j in range(c, n)]


def saturated_basis(vectors, n: int) -> list[tuple[int, ...]]:
    """Integer basis of Z^n intersected with the rational span of ``vectors``."""
    vectors = [v for v in vectors if any(Fraction(x) != 0 for x in v)]
    if not vectors:
        return []
    complement = nullspace(vectors, n)
    return integer_kernel(complement, n)


def coords_in_basis(basis, x) -> tuple:
    """Coordinates of x in the (independent) basis, exactly; raises if x not in span."""
    A = [[b[i] for b in basis] for i in range(len(x))]
    sol = solve_any(A, list(x))
    if sol is None or matvec(A, sol) != tuple(Fraction(v) for v in x):
        raise ValueError("vector not in span of basis")
    return sol


def lattice_volume(edges, n: int) -> Fraction:
    """Normalized lattice volume of the simplex spanned by ``edges`` from a vertex.

    Measured against the saturated lattice of the edge span, so a unimodular
    simplex of any dimension has volume 1.
    """
    edges = [tuple(Fraction(x) for x in e) for e in edges]
    if not edges:
        return Fraction(1)
    if rank(edges) < len(edges):
        return Fraction(0)
    B = saturated_basis(edges, n)
    X = [coords_in_basis(B, e) for e in edges]
    return abs(det(X))


def affine_rank(points) -> int:
    points = list(points)
    if not points:
        return -1
    p0 = points[0]
    return rank([sub(p, p0) for p in points[1:]]) if len(points) > 1 else 0
