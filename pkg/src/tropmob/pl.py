"""Piecewise-linear calculus: tropical polynomials, corner loci, monomial maps.

A :class:`PLFunction` is a min of affine pieces ``<c, y> + k`` with integer
linear parts.  A :class:`PLMap` is a finite list of affine pieces, each valid
on a polyhedral region ``{y : G y >= h}`` of the source.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from . import linalg as la
from .errors import NotMeasureScaling, UnsupportedMap
from .field import format_scalar, parse_scalar
from .lattice import LiftedLaurentPolynomial


@dataclass(frozen=True)
class PLFunction:
    n: int
    pieces: tuple[tuple[tuple[int, ...], Fraction], ...]  # (linear part, constant)

    def __post_init__(self):
        if not self.pieces:
            raise ValueError("PL function needs at least one affine piece")
        if len(set(self.pieces)) != len(self.pieces):
            raise ValueError("affine pieces must be pairwise distinct")
        for c, _ in self.pieces:
            if len(c) != self.n:
                raise ValueError("linear part has wrong dimension")

    @classmethod
    def of(cls, n: int, pieces) -> "PLFunction":
        return cls(n, tuple((tuple(int(x) for x in c), Fraction(k)) for c, k in pieces))

    def __call__(self, y) -> Fraction:
        return eval_pl(self, y)[0]

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "mode": "min",
            "terms": [{"exp": list(c), "lift": format_scalar(k)} for c, k in self.pieces],
        }

    @classmethod
    def from_json(cls, obj) -> "PLFunction":
        return cls.of(int(obj["n"]), [(t["exp"], Fraction(parse_scalar(t["lift"]))) for t in obj["terms"]])

    def canonical(self) -> "PLFunction":
        """Drop pieces dominated by a piece with the same linear part; sort."""
        best: dict = {}
        for c, k in self.pieces:
            if c not in best or k < best[c]:
                best[c] = k
        return PLFunction(self.n, tuple(sorted(best.items())))


def tropicalize(f: LiftedLaurentPolynomial) -> PLFunction:
    return PLFunction(f.n, tuple((t.exp, t.lift) for t in f.terms))


def eval_pl(ell: PLFunction, y) -> tuple[Fraction, frozenset[int]]:
    y = [Fraction(v) for v in y]
    if len(y) != ell.n:
        raise ValueError("point has wrong dimension")
    vals = [la.dot(c, y) + k for c, k in ell.pieces]
    m = min(vals)
    return m, frozenset(i for i, v in enumerate(vals) if v == m)


def on_corner_locus(ell: PLFunction, y) -> bool:
    return len(eval_pl(ell, y)[1]) >= 2


# ---------------------------------------------------------------------------
# Corner locus
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LocusPiece:
    """Closed (n-1)-dimensional stratum where exactly the pieces in ``indices`` tie."""

    indices: tuple[int, ...]
    vertices: tuple[tuple[Fraction, ...], ...]
    rays: tuple[tuple[int, ...], ...]
    lineality: tuple[tuple[int, ...], ...]
    equations: tuple  # (normal, offset): <normal, y> = offset
    inequalities: tuple  # (normal, offset): <normal, y> >= offset


@dataclass(frozen=True)
class CornerLocus:
    n: int
    pieces: tuple[LocusPiece, ...]

    def is_empty(self) -> bool:
        return not self.pieces

    def contains(self, y) -> bool:
        y = [Fraction(v) for v in y]
        return any(
            all(la.dot(a, y) == b for a, b in p.equations)
            and all(la.dot(a, y) >= b for a, b in p.inequalities)
            for p in self.pieces
        )

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "pieces": [
                {
                    "indices": list(p.indices),
                    "vertices": [[format_scalar(x) for x in v] for v in p.vertices],
                    "rays": [list(r) for r in p.rays],
                    "lineality": [list(r) for r in p.lineality],
                }
                for p in self.pieces
            ],
        }


def _polyhedron_vrep(A, r, d):
    """Vertices, extreme rays and lineality of {z in Q^d : A z >= r} (brute force, small d)."""
    lin = la.nullspace(A, d) if A else [tuple(Fraction(int(i == j)) for j in range(d)) for i in range(d)]
    if not A:
        return [tuple(Fraction(0) for _ in range(d))], [], lin
    # restrict to the orthogonal complement of the lineality space
    K = la.nullspace(lin, d) if lin else [tuple(Fraction(int(i == j)) for j in range(d)) for i in range(d)]
    m = len(K)
    AK = [tuple(la.dot(row, kv) for kv in K) for row in A]
    to_z = lambda mu: tuple(sum((mu[i] * K[i][j] for i in range(m)), Fraction(0)) for j in range(d))
    if m == 0:
        feasible = all(Fraction(0) >= ri for ri in r)
        return ([tuple(Fraction(0) for _ in range(d))] if feasible else []), [], lin
    verts = set()
    for rows in combinations(range(len(A)), m):
        sol = la.solve([AK[i] for i in rows], [r[i] for i in rows])
        if sol is None:
            continue
        if all(la.dot(AK[i], sol) >= r[i] for i in range(len(A))):
            verts.add(sol)
    rays = set()
    for rows in combinations(range(len(A)), m - 1):
        ns = la.nullspace([AK[i] for i in rows], m) if rows else [tuple(Fraction(int(i == j)) for j in range(m)) for i in range(m)]
        if len(ns) != 1:
            continue
        for sgn in (1, -1):
            dvec = tuple(sgn * x for x in ns[0])
            if all(la.dot(AK[i], dvec) >= 0 for i in range(len(A))):
                rays.add(la.primitive(dvec))
    return [to_z(v) for v in sorted(verts)], [to_z(rv) for rv in sorted(rays)], lin


def corner_locus(ell: PLFunction) -> CornerLocus:
    """Maximal strata of the non-differentiability locus of a min of affine functions."""
    ell = ell.canonical()
    n = ell.n
    P = ell.pieces
    found: dict[tuple, LocusPiece] = {}
    for i, j in combinations(range(len(P)), 2):
        ci, ki = P[i]
        cj, kj = P[j]
        normal = la.sub(ci, cj)
        if not any(normal):
            continue
        offset = kj - ki  # <ci - cj, y> = kj - ki
        B = la.nullspace([normal], n)  # plane directions
        y0 = la.solve_any([normal], [offset])
        ties, A, r, empty = [i, j], [], [], False
        for k, (ck, kk) in enumerate(P):
            if k in (i, j):
                continue
            # (l_k - l_i)(y0 + B z) = <ck - ci, y0> + kk - ki + <ck - ci, B z>
            dk = la.sub(ck, ci)
            const = la.dot(dk, y0) + kk - ki
            row = tuple(la.dot(dk, b) for b in B)
            if not any(row):
                if const == 0:
                    ties.append(k)
                elif const < 0:
                    empty = True
                    break
                continue
            A.append(row)
            r.append(-const)
        if empty:
            continue
        key = tuple(sorted(ties))
        if key in found:
            continue
        verts, rays, lin = _polyhedron_vrep(A, r, n - 1)
        if not verts:
            continue
        to_y = lambda z: tuple(y0[t] + sum((z[s] * B[s][t] for s in range(len(B))), Fraction(0)) for t in range(n))
        to_dir = lambda z: tuple(sum((z[s] * B[s][t] for s in range(len(B))), Fraction(0)) for t in range(n))
        yv = [to_y(v) for v in verts]
        dirs = [la.sub(v, yv[0]) for v in yv[1:]] + [to_dir(x) for x in rays] + [to_dir(x) for x in lin]
        nonzero = [d for d in dirs if any(d)]
        if (la.rank(nonzero) if nonzero else 0) != n - 1:
            continue
        eqs = []
        for a in key[1:]:
            nm = la.sub(P[key[0]][0], P[a][0])
            eqs.append((nm, P[a][1] - P[key[0]][1]))
        ineqs = tuple(
            (la.sub(P[k][0], P[key[0]][0]), P[key[0]][1] - P[k][1]) for k in range(len(P)) if k not in key
        )
        found[key] = LocusPiece(
            key,
            tuple(sorted(yv)),
            tuple(sorted(la.primitive(to_dir(x)) for x in rays)),
            tuple(sorted(la.primitive(to_dir(x)) for x in lin)),
            tuple(eqs),
            ineqs,
        )
    return CornerLocus(n, tuple(found[k] for k in sorted(found)))


# ---------------------------------------------------------------------------
# PL maps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MapCell:
    matrix: tuple[tuple[int, ...], ...]
    shift: tuple[Fraction, ...]
    region: tuple = ()  # (normal, offset) inequalities <normal, y> >= offset; () = everywhere

    def contains(self, y) -> bool:
        return all(la.dot(a, y) >= b for a, b in self.region)

    def apply(self, y) -> tuple[Fraction, ...]:
        return tuple(la.dot(row, y) + s for row, s in zip(self.matrix, self.shift))


@dataclass(frozen=True)
class PLMap:
    source_dim: int
    target_dim: int
    cells: tuple[MapCell, ...]

    def __post_init__(self):
        for c in self.cells:
            if len(c.matrix) != self.target_dim or any(len(r) != self.source_dim for r in c.matrix):
                raise ValueError("matrix shape does not match map dimensions")

    @property
    def single_cell(self) -> bool:
        return len(self.cells) == 1 and not self.cells[0].region

    def cell_at(self, y) -> MapCell:
        y = [Fraction(v) for v in y]
        for c in self.cells:
            if c.contains(y):
                return c
        raise ValueError(f"point {y} outside every cell of the map")

    def __call__(self, y) -> tuple[Fraction, ...]:
        return self.cell_at(y).apply([Fraction(v) for v in y])

    def compose(self, inner: "PLMap") -> "PLMap":
        """self o inner, for single-cell maps."""
        if not (self.single_cell and inner.single_cell):
            raise UnsupportedMap("composition implemented for single-cell maps only")
        A, b = self.cells[0].matrix, self.cells[0].shift
        B, c = inner.cells[0].matrix, inner.cells[0].shift
        AB = la.matmul(A, B)
        shift = tuple(x + y for x, y in zip(la.matvec(A, c), b))
        return tropicalize_monomial_map([[int(x) for x in r] for r in AB], shift)

    def to_json(self) -> dict:
        if self.single_cell:
            c = self.cells[0]
            return {"matrix": [list(r) for r in c.matrix], "shift": [format_scalar(s) for s in c.shift]}
        return {
            "source_dim": self.source_dim,
            "target_dim": self.target_dim,
            "cells": [
                {
                    "matrix": [list(r) for r in c.matrix],
                    "shift": [format_scalar(s) for s in c.shift],
                    "region": [{"normal": [format_scalar(x) for x in a], "offset": format_scalar(b)} for a, b in c.region],
                }
                for c in self.cells
            ],
        }

    @classmethod
    def from_json(cls, obj) -> "PLMap":
        if "cells" not in obj:
            return tropicalize_monomial_map(obj["matrix"], [parse_scalar(s) for s in obj["shift"]])
        cells = tuple(
            MapCell(
                tuple(tuple(int(x) for x in r) for r in c["matrix"]),
                tuple(Fraction(parse_scalar(s)) for s in c["shift"]),
                tuple((tuple(Fraction(parse_scalar(x)) for x in g["normal"]), Fraction(parse_scalar(g["offset"]))) for g in c["region"]),
            )
            for c in obj["cells"]
        )
        return cls(int(obj["source_dim"]), int(obj["target_dim"]), cells)


def tropicalize_monomial_map(A: Sequence[Sequence[int]], shifts: Sequence | None = None) -> PLMap:
    """x -> c * x^A tropicalizes to the affine map y -> A y + b."""
    A = tuple(tuple(int(x) for x in row) for row in A)
    m = len(A)
    n = len(A[0]) if A else 0
    b = tuple(Fraction(s) for s in shifts) if shifts is not None else tuple(Fraction(0) for _ in range(m))
    if len(b) != m:
        raise ValueError("shift length must equal the number of rows")
    return PLMap(n, m, (MapCell(A, b),))


def frobenius(d: int, dim: int) -> PLMap:
    return tropicalize_monomial_map([[d * int(i == j) for j in range(dim)] for i in range(dim)])


def pullback_pl(phi: PLMap, ell: PLFunction) -> PLFunction:
    if phi.target_dim != ell.n:
        raise ValueError("dimension mismatch between map target and PL function")
    if not phi.single_cell:
        raise UnsupportedMap("pullback of a min-of-affine function is defined for single-cell maps")
    A, b = phi.cells[0].matrix, phi.cells[0].shift
    At = la.transpose(A)
    pieces = [
        (tuple(int(x) for x in la.matvec(At, c)), k + la.dot(c, b)) for c, k in ell.pieces
    ]
    best: dict = {}
    for c, k in pieces:
        if c not in best or k < best[c]:
            best[c] = k
    # keep first-seen order of linear parts for readability
    order = []
    for c, _ in pieces:
        if c not in order:
            order.append(c)
    return PLFunction(phi.source_dim, tuple((c, best[c]) for c in order))


@dataclass(frozen=True)
class DilationFactor:
    value: int

    def __post_init__(self):
        if self.value < 1:
            raise ValueError("dilation factor must be >= 1")


def dilation_factor(phi: PLMap) -> DilationFactor:
    if phi.source_dim != phi.target_dim:
        raise NotMeasureScaling("source and target dimensions differ")
    dets = [abs(la.det(c.matrix)) for c in phi.cells]
    if any(d == 0 for d in dets):
        raise NotMeasureScaling(f"Jacobian determinant vanishes on a cell: {[str(d) for d in dets]}")
    if len(set(dets)) != 1:
        raise NotMeasureScaling(f"Jacobian determinant varies across cells: {[str(d) for d in dets]}")
    return DilationFactor(int(dets[0]))
