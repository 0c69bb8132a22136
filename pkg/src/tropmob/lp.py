"""Small exact linear-programming solver (two-phase tableau simplex, Bland's rule).

Solves  maximize c.x  subject to  A_ub x <= b_ub,  A_eq x = b_eq,  x free,
over the rationals.  Intended for the tiny LPs of this package, not for speed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: tuple | None
    value: Fraction | None


def _pivot(T, basis, r, c):
    inv = 1 / T[r][c]
    T[r] = [v * inv for v in T[r]]
    for i in range(len(T)):
        if i != r and T[i][c] != 0:
            f = T[i][c]
            T[i] = [a - f * b for a, b in zip(T[i], T[r])]
    basis[r] = c


def _run(T, basis, obj_row, allowed):
    """Maximize the objective stored (negated) in row ``obj_row``; Bland's rule."""
    m = len(T) - (len(T) - obj_row)  # constraint rows are 0..obj_row-1
    while True:
        obj = T[obj_row]
        col = next((j for j in allowed if obj[j] < 0), None)
        if col is None:
            return "optimal"
        best = None
        for i in range(m):
            a = T[i][col]
            if a > 0:
                ratio = T[i][-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return "unbounded"
        _pivot(T, basis, best[1], col)


def maximize(c: Sequence, A_ub: Sequence[Sequence] = (), b_ub: Sequence = (),
             A_eq: Sequence[Sequence] = (), b_eq: Sequence = ()) -> LPResult:
    n = len(c)
    c = [Fraction(v) for v in c]
    rows = []  # (coeffs over x+, x-, slacks), rhs
    n_ub = len(A_ub)
    for k, (a, b) in enumerate(zip(A_ub, b_ub)):
        a = [Fraction(v) for v in a]
        slack = [Fraction(int(k == j)) for j in range(n_ub)]
        rows.append((a + [-v for v in a] + slack, Fraction(b)))
    for a, b in zip(A_eq, b_eq):
        a = [Fraction(v) for v in a]
        rows.append((a + [-v for v in a] + [Fraction(0)] * n_ub, Fraction(b)))
    nv = 2 * n + n_ub
    m = len(rows)
    # flip rows to make rhs >= 0, then add one artificial per row
    T = []
    for i, (a, b) in enumerate(rows):
        if b < 0:
            a, b = [-v for v in a], -b
        art = [Fraction(int(i == j)) for j in range(m)]
        T.append(a + art + [b])
    basis = [nv + i for i in range(m)]
    total = nv + m
    # phase 1: maximize -sum(art)  <=> objective row = sum of constraint rows negated
    obj1 = [Fraction(0)] * (total + 1)
    for row in T:
        for j in range(nv):
            obj1[j] -= row[j]
        obj1[-1] -= row[-1]
    T.append(obj1)
    _run(T, basis, m, list(range(nv)))
    if T[m][-1] != 0:
        return LPResult("infeasible", None, None)
    # drive artificials out of the basis where possible
    for i in range(m):
        if basis[i] >= nv:
            j = next((j for j in range(nv) if T[i][j] != 0), None)
            if j is not None:
                _pivot(T, basis, i, j)
    T.pop()
    # phase 2 objective: maximize c.(x+ - x-)
    cfull = c + [-v for v in c] + [Fraction(0)] * n_ub
    obj2 = [-v for v in cfull] + [Fraction(0)] * m + [Fraction(0)]
    for i in range(m):
        b = basis[i]
        if b < nv and cfull[b] != 0:
            f = obj2[b]
            obj2 = [a - f * r for a, r in zip(obj2, T[i])]
    T.append(obj2)
    status = _run(T, basis, m, list(range(nv)))
    if status == "unbounded":
        return LPResult("unbounded", None, None)
    vals = [Fraction(0)] * total
    for i in range(m):
        vals[basis[i]] = T[i][-1]
    x = tuple(vals[j] - vals[n + j] for j in range(n))
    value = sum((ci * xi for ci, xi in zip(c, x)), Fraction(0))
    return LPResult("optimal", x, value)
