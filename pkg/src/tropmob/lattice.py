"""Lattice polytopes, regular subdivisions and the dual tropical complex.

Everything here is exact (Fractions).  Tropical convention is min-plus:
``trop f(y) = min_j (v(j) + <j, y>)``, so cells of the regular subdivision are
projections of *lower* faces of the lifted support ``{(j, v(j))}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from . import linalg as la
from .errors import DegenerateDual
from .field import Scalar, format_scalar, parse_scalar


@dataclass(frozen=True)
class Verdict:
    ok: bool
    witness: object = None
    message: str = ""

    def __bool__(self):
        return self.ok


# ---------------------------------------------------------------------------
# Lifted Laurent polynomials
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Term:
    exp: tuple[int, ...]
    coeff: Scalar
    lift: Fraction


@dataclass(frozen=True)
class LiftedLaurentPolynomial:
    """f = sum_j a_j t^{v(j)} x^j over a finite support in Z^n."""

    n: int
    terms: tuple[Term, ...]
    field_d: int | None = None  # radicand of Q(sqrt d), None for Q

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if not self.terms:
            raise ValueError("polynomial needs at least one term")
        seen = set()
        for t in self.terms:
            if len(t.exp) != self.n:
                raise ValueError(f"exponent {t.exp} not in Z^{self.n}")
            if t.exp in seen:
                raise ValueError(f"repeated exponent {t.exp}")
            if t.coeff == 0:
                raise ValueError(f"zero coefficient at {t.exp}")
            seen.add(t.exp)

    @classmethod
    def build(cls, n: int, data: Iterable, field_d: int | None = None) -> "LiftedLaurentPolynomial":
        """``data``: iterable of (exp, coeff, lift) or (exp, lift) with coeff 1."""
        terms = []
        for item in data:
            if len(item) == 2:
                exp, lift = item
                coeff = Fraction(1)
            else:
                exp, coeff, lift = item
            if isinstance(coeff, (int, str)):
                coeff = parse_scalar(coeff, field_d) if isinstance(coeff, str) else Fraction(coeff)
            terms.append(Term(tuple(int(k) for k in exp), coeff, Fraction(lift)))
        return cls(n, tuple(terms), field_d)

    @property
    def support(self) -> list[tuple[int, ...]]:
        return [t.exp for t in self.terms]

    @property
    def lifts(self) -> list[Fraction]:
        return [t.lift for t in self.terms]

    def to_json(self) -> dict:
        fld = {"type": "rational"} if self.field_d is None else {"type": "quadratic", "d": self.field_d}
        return {
            "n": self.n,
            "field": fld,
            "terms": [
                {"exp": list(t.exp), "coeff": format_scalar(t.coeff), "lift": format_scalar(t.lift)}
                for t in self.terms
            ],
        }

    @classmethod
    def from_json(cls, obj) -> "LiftedLaurentPolynomial":
        fld = obj.get("field", {"type": "rational"})
        d = fld.get("d") if fld.get("type") == "quadratic" else None
        terms = tuple(
            Term(tuple(int(k) for k in t["exp"]), parse_scalar(t["coeff"], d),
                 Fraction(parse_scalar(t.get("lift", "0"))))
            for t in obj["terms"]
        )
        return cls(int(obj["n"]), terms, d)


# ---------------------------------------------------------------------------
# Exact convex hulls
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Hull:
    points: tuple[tuple, ...]
    dim: int
    pivots: tuple[int, ...]
    facets_u: tuple  # (normal in pivot coords, offset, tight index frozenset), inner normals
    vertex_ids: tuple[int, ...]
    equations: tuple  # (primitive normal, offset) with <normal, x> = offset on the hull


def _frame(points):
    p0 = points[0]
    diffs = [la.sub(p, p0) for p in points[1:]]
    if not diffs:
        return (), []
    _, piv = la.rref(diffs)
    return tuple(piv), diffs


def convex_hull(points: Sequence[Sequence]) -> Hull:
    """Facets and vertices of conv(points); works inside the affine hull."""
    pts = tuple(tuple(Fraction(x) for x in p) for p in points)
    if not pts:
        raise ValueError("empty point set")
    n = len(pts[0])
    pivots, diffs = _frame(pts)
    k = len(pivots)
    u = [tuple(p[i] for i in pivots) for p in pts]
    equations = []
    for c in la.nullspace(diffs, n) if diffs else [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]:
        if k == n:
            break
        c = la.primitive(c)
        equations.append((c, la.dot(c, pts[0])))
    if k == 0:
        return Hull(pts, 0, pivots, (), (0,), tuple(equations))
    # distinct u-points in first-occurrence order
    distinct: list[int] = []
    seen = set()
    for i, q in enumerate(u):
        if q not in seen:
            seen.add(q)
            distinct.append(i)
    facets = []
    found: list[frozenset] = []
    for sub in combinations(distinct, k):
        ss = frozenset(sub)
        if any(ss <= t for t in found):
            continue
        base = u[sub[0]]
        rows = [la.sub(u[j], base) for j in sub[1:]]
        ns = la.nullspace(rows, k) if rows else [tuple(Fraction(int(i == 0)) for i in range(k))]
        if len(ns) != 1:
            continue
        a = la.primitive(ns[0])
        vals = [la.dot(a, q) for q in u]
        b = vals[sub[0]]
        if all(v >= b for v in vals):
            pass
        elif all(v <= b for v in vals):
            a = tuple(-x for x in a)
            b = -b
            vals = [-v for v in vals]
        else:
            continue
        tight = frozenset(i for i, v in enumerate(vals) if v == b)
        found.append(tight)
        facets.append((a, b, tight))
    facets.sort(key=lambda f: (f[0], f[1]))
    vertex_ids = []
    for i in distinct:
        normals = [f[0] for f in facets if i in f[2]]
        if normals and la.rank(normals) == k:
            vertex_ids.append(i)
    return Hull(pts, k, pivots, tuple(facets), tuple(vertex_ids), tuple(equations))


@dataclass(frozen=True)
class NewtonPolytope:
    n: int
    dim: int
    vertices: tuple[tuple[int, ...], ...]
    facets: tuple  # (primitive inner normal in Z^n, offset): <a, x> >= b
    equations: tuple  # affine hull when dim < n: <c, x> = e

    def contains(self, x) -> bool:
        x = [Fraction(v) for v in x]
        return all(la.dot(a, x) >= b for a, b in self.facets) and all(
            la.dot(c, x) == e for c, e in self.equations
        )

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "dim": self.dim,
            "vertices": [list(v) for v in self.vertices],
            "facets": [{"normal": list(a), "offset": format_scalar(b)} for a, b in self.facets],
            "equations": [{"normal": list(c), "offset": format_scalar(e)} for c, e in self.equations],
        }


def _ambient_facets(h: Hull, n: int):
    out = []
    for a, b, _ in h.facets_u:
        full = [Fraction(0)] * n
        for i, p in enumerate(h.pivots):
            full[p] = Fraction(a[i])
        out.append((tuple(int(x) for x in full), Fraction(b)))
    return tuple(sorted(out))


def support_polytope(f: LiftedLaurentPolynomial) -> NewtonPolytope:
    h = convex_hull(f.support)
    verts = tuple(sorted(tuple(int(x) for x in h.points[i]) for i in h.vertex_ids))
    return NewtonPolytope(f.n, h.dim, verts, _ambient_facets(h, f.n), h.equations)


# ---------------------------------------------------------------------------
# Regular subdivisions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RegularSubdivision:
    points: tuple[tuple[int, ...], ...]
    lifts: tuple[Fraction, ...]
    cells: tuple[tuple[int, ...], ...]  # indices into points
    heights: tuple  # per cell: (a, c) with v(j) = <a, u_j> + c on the cell (u = pivot coords)
    pivots: tuple[int, ...]
    dim: int

    def cell_points(self, i: int) -> list[tuple[int, ...]]:
        return [self.points[j] for j in self.cells[i]]

    def to_json(self) -> dict:
        return {
            "points": [list(p) for p in self.points],
            "lifts": [format_scalar(v) for v in self.lifts],
            "dim": self.dim,
            "cells": [[list(self.points[j]) for j in c] for c in self.cells],
        }


def _u(points, pivots):
    return [tuple(Fraction(p[i]) for i in pivots) for p in points]


def _rotate(u, h, g, b, beta):
    """Tilt the supporting affine function g about {<b,u> = beta} until it hits a new point."""
    a, c = g
    best = None
    for q, hq in zip(u, h):
        s = beta - la.dot(b, q)
        if s > 0:
            r = (hq - la.dot(a, q) - c) / s
            if best is None or r < best:
                best = r
    if best is None:
        return None
    lam = best
    return (tuple(x - lam * y for x, y in zip(a, b)), c + lam * beta)


def _tight(u, h, g):
    a, c = g
    return frozenset(i for i, (q, hq) in enumerate(zip(u, h)) if la.dot(a, q) + c == hq)


def lower_hull_subdivision(f: LiftedLaurentPolynomial) -> RegularSubdivision:
    """Regular subdivision induced by the lifts, via exact gift-wrapping of the lower hull."""
    points = tuple(f.support)
    h = tuple(f.lifts)
    pivots, _ = _frame([tuple(Fraction(x) for x in p) for p in points])
    k = len(pivots)
    u = _u(points, pivots)
    if k == 0:
        return RegularSubdivision(points, h, ((0,),), (((), h[0]),), pivots, 0)

    # initial lower facet: start flat at min height and tilt until the contact set is full-dim
    g = (tuple(Fraction(0) for _ in range(k)), min(h))
    T = _tight(u, h, g)
    while la.affine_rank([u[i] for i in T]) < k:
        Tl = sorted(T)
        rows = [la.sub(u[i], u[Tl[0]]) for i in Tl[1:]]
        comp = la.nullspace(rows, k) if rows else [tuple(Fraction(int(i == j)) for j in range(k)) for i in range(k)]
        b = next(v for v in comp if len({la.dot(v, q) for q in u}) > 1)
        beta = la.dot(b, u[Tl[0]])
        if not any(la.dot(b, q) < beta for q in u):
            b = tuple(-x for x in b)
            beta = -beta
        g = _rotate(u, h, g, b, beta)
        T = _tight(u, h, g)

    cells: dict[frozenset, tuple] = {T: g}
    queue = [T]
    while queue:
        C = queue.pop()
        g = cells[C]
        Cl = sorted(C)
        hull = convex_hull([u[i] for i in Cl])
        for a_f, b_f, _ in hull.facets_u:
            if not any(la.dot(a_f, q) < b_f for q in u):
                continue  # facet lies on the boundary of the Newton polytope
            g2 = _rotate(u, h, g, a_f, b_f)
            T2 = _tight(u, h, g2)
            if T2 not in cells:
                if la.affine_rank([u[i] for i in T2]) != k:
                    raise AssertionError("gift-wrapping produced a degenerate cell")
                cells[T2] = g2
                queue.append(T2)

    order = sorted(cells, key=lambda c: sorted(points[i] for i in c))
    cell_tuples = tuple(tuple(sorted(c, key=lambda i: points[i])) for c in order)
    heights = tuple(cells[c] for c in order)
    return RegularSubdivision(points, h, cell_tuples, heights, pivots, k)


def is_unimodular_triangulation(s: RegularSubdivision) -> Verdict:
    n = len(s.points[0])
    for ci, cell in enumerate(s.cells):
        pts = s.cell_points(ci)
        if len(pts) != s.dim + 1:
            return Verdict(False, ci, f"cell {ci} is not a simplex ({len(pts)} points)")
        edges = [la.sub(p, pts[0]) for p in pts[1:]]
        vol = la.lattice_volume(edges, n)
        if vol != 1:
            return Verdict(False, ci, f"cell {ci} has normalized volume {vol}")
    return Verdict(True)


# ---------------------------------------------------------------------------
# Dual complex
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DualFace:
    dim: int
    cell: tuple[int, ...]  # dual subdivision face, as indices into the support
    vertices: tuple[int, ...]  # indices into DualComplex.vertices
    rays: tuple[tuple[int, ...], ...]
    weight: int | None = None

    @property
    def bounded(self) -> bool:
        return not self.rays


@dataclass(frozen=True)
class DualComplex:
    n: int
    support: tuple[tuple[int, ...], ...]
    vertices: tuple[tuple[Fraction, ...], ...]  # one per maximal cell, same order
    faces: tuple[DualFace, ...]

    def faces_of_dim(self, d: int) -> list[DualFace]:
        return [fc for fc in self.faces if fc.dim == d]

    def top_faces(self) -> list[DualFace]:
        return self.faces_of_dim(self.n - 1)

    def bounded_edges(self) -> list[DualFace]:
        return [fc for fc in self.faces_of_dim(1) if fc.bounded]

    def rays(self) -> list[DualFace]:
        return [fc for fc in self.faces_of_dim(1) if not fc.bounded and len(fc.vertices) == 1]

    def is_empty(self) -> bool:
        return not self.vertices

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "support": [list(p) for p in self.support],
            "vertices": [[format_scalar(x) for x in v] for v in self.vertices],
            "faces": [
                {
                    "dim": fc.dim,
                    "cell": list(fc.cell),
                    "vertices": list(fc.vertices),
                    "rays": [list(r) for r in fc.rays],
                    "weight": fc.weight,
                }
                for fc in self.faces
            ],
        }

    @classmethod
    def from_json(cls, obj) -> "DualComplex":
        return cls(
            int(obj["n"]),
            tuple(tuple(int(k) for k in p) for p in obj["support"]),
            tuple(tuple(Fraction(parse_scalar(x)) for x in v) for v in obj["vertices"]),
            tuple(
                DualFace(int(fc["dim"]), tuple(fc["cell"]), tuple(fc["vertices"]),
                         tuple(tuple(r) for r in fc["rays"]), fc["weight"])
                for fc in obj["faces"]
            ),
        )


def subdivision_faces(s: RegularSubdivision) -> dict[frozenset, int]:
    """All faces (as support-index sets) of all cells, with their dimensions."""
    memo: dict[frozenset, int] = {}

    def visit(idx: frozenset):
        if idx in memo:
            return
        pts = [s.points[i] for i in sorted(idx)]
        h = convex_hull(pts)
        memo[idx] = h.dim
        if h.dim == 0:
            return
        order = sorted(idx)
        for _, _, tight in h.facets_u:
            visit(frozenset(order[i] for i in tight))

    for c in s.cells:
        visit(frozenset(c))
    return memo


def _lattice_length(points) -> int:
    pts = sorted(points)
    d = la.sub(pts[-1], pts[0])
    g = 0
    for x in d:
        g = math.gcd(g, int(x))
    return g


def dual_complex(f: LiftedLaurentPolynomial, subdivision: RegularSubdivision | None = None) -> DualComplex:
    s = subdivision or lower_hull_subdivision(f)
    n = f.n
    if len(s.points) == 1:
        return DualComplex(n, s.points, (), ())
    if s.dim < n:
        raise DegenerateDual(
            f"Newton polytope has dimension {s.dim} < {n}: the dual vertices are not isolated"
        )
    vertices = tuple(tuple(-x for x in a) for a, _ in s.heights)
    newton = convex_hull(s.points)
    delta_facets = [(a, tight) for a, _, tight in newton.facets_u]
    cellsets = [frozenset(c) for c in s.cells]
    faces = []
    for F, d in subdivision_faces(s).items():
        if d == 0:
            continue
        vids = tuple(i for i, C in enumerate(cellsets) if F <= C)
        rays = tuple(sorted(tuple(int(x) for x in a) for a, tight in delta_facets if F <= tight))
        weight = _lattice_length([s.points[i] for i in F]) if d == 1 else None
        cell = tuple(sorted(F, key=lambda i: s.points[i]))
        faces.append(DualFace(n - d, cell, vids, rays, weight))
    faces.sort(key=lambda fc: (fc.dim, [s.points[i] for i in fc.cell]))
    return DualComplex(n, s.points, vertices, tuple(faces))


def relative_interior_point(p: DualComplex, face: DualFace) -> tuple:
    n = p.n
    acc = [Fraction(0)] * n
    for v in face.vertices:
        acc = [a + x for a, x in zip(acc, p.vertices[v])]
    acc = [a / len(face.vertices) for a in acc]
    for r in face.rays:
        acc = [a + x for a, x in zip(acc, r)]
    return tuple(acc)


def _direction_space(p: DualComplex, face: DualFace) -> list[tuple]:
    vs = [p.vertices[v] for v in face.vertices]
    dirs = [la.sub(v, vs[0]) for v in vs[1:]] + [tuple(Fraction(x) for x in r) for r in face.rays]
    return [d for d in dirs if any(d)]


def check_balancing(p: DualComplex) -> Verdict:
    """Weighted primitive directions around each codimension-1 face sum into its span."""
    n = p.n
    if n < 2 or p.is_empty():
        return Verdict(True)
    tops = p.top_faces()
    for q in p.faces_of_dim(n - 2):
        qcell = set(q.cell)
        vq = _direction_space(p, q)
        lq = la.saturated_basis(vq, n)
        base = relative_interior_point(p, q)
        total = [Fraction(0)] * n
        for top in tops:
            if not set(top.cell) <= qcell:
                continue
            if top.weight is None:
                return Verdict(False, q, "top face without weight")
            d = la.sub(relative_interior_point(p, top), base)
            lp = la.saturated_basis(_direction_space(p, top), n)
            C = [la.coords_in_basis(lp, b) for b in lq]
            psi = la.integer_kernel(C, len(lp))
            if len(psi) != 1:
                return Verdict(False, q, "adjacent face is not of codimension one")
            s = la.dot(psi[0], la.coords_in_basis(lp, d))
            total = [t + top.weight * x / abs(s) for t, x in zip(total, d)]
        bad = la.rank(vq + [tuple(total)]) != la.rank(vq) if vq else any(total)
        if bad:
            return Verdict(False, q, f"unbalanced: weighted sum {[str(x) for x in total]}")
    return Verdict(True)
