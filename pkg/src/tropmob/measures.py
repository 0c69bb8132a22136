"""Measures on complexes and the local order-of-vanishing engine.

* :class:`LocalChart` + :func:`restrict_to_hypersurface` / :func:`local_order`:
  order of vanishing at the origin of a section restricted to a smooth
  hypersurface germ, via the implicit-function power series.
* :class:`ComplexMeasure`: atomic measures (anchor, mass) or Lebesgue measures
  on simplicial cells (density w.r.t. lattice-normalized volume).
* pushforward / pullback along PL maps and the projection formula.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg as la
from .errors import (
    AnchorOffCornerLocus,
    NoPreimage,
    NotCellwiseInjective,
    NotSmoothPoint,
    OrderUndetermined,
)
from .field import format_scalar, parse_scalar
from .pl import PLFunction, PLMap, eval_pl
from .poly import Poly

# ---------------------------------------------------------------------------
# Local charts and orders of vanishing
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Undetermined:
    """The order is at least ``bound + 1``; nothing was seen up to degree ``bound``."""

    bound: int

    def __str__(self):
        return f">{self.bound}"


@dataclass(frozen=True)
class LocalChart:
    """Hypersurface germ {f = 0} at the origin, solved for variable ``solve_for``."""

    n: int
    f: Poly
    solve_for: int
    truncation: int | None = None

    def __post_init__(self):
        if self.f.nvars != self.n:
            raise ValueError("chart polynomial has wrong number of variables")
        if not 0 <= self.solve_for < self.n:
            raise ValueError("solve_for out of range")
        if self.f.constant_term() != 0:
            raise ValueError("chart polynomial must vanish at the origin")
        if self.slope == 0:
            raise NotSmoothPoint(
                f"df/dx{self.solve_for} vanishes at the origin; choose another coordinate"
            )

    @property
    def slope(self):
        e = [0] * self.n
        e[self.solve_for] = 1
        return self.f.coeff(tuple(e))

    @property
    def free_vars(self) -> list[int]:
        return [i for i in range(self.n) if i != self.solve_for]

    def default_truncation(self, g: Poly) -> int:
        if self.truncation is not None:
            return self.truncation
        return max(1, 2 * max(g.degree(), 1) * max(self.f.degree(), 1))

    def to_json(self) -> dict:
        out = {"n": self.n, "f": self.f.to_json(), "solve_for": self.solve_for}
        if self.truncation is not None:
            out["truncation"] = self.truncation
        return out

    @classmethod
    def from_json(cls, obj, d: int | None = None) -> "LocalChart":
        f = Poly.from_json(obj["f"], d)
        return cls(int(obj["n"]), f, int(obj["solve_for"]), obj.get("truncation"))


def implicit_solution(chart: LocalChart, deg: int) -> Poly:
    """w = phi(z) with f(z, phi(z)) = 0, phi(0) = 0, truncated at total degree ``deg``.

    Degree-by-degree fixed-slope Newton step: if phi is exact below degree k,
    the residual f(z, phi) starts in degree k and its degree-k part divided
    by the slope c = df/dw(0) is the next correction.
    """
    m = chart.n - 1
    z = Poly.gens(m)
    inv = 1 / chart.slope
    phi = Poly(m)
    for k in range(1, deg + 1):
        residual = chart.f.compose(_substitution(chart, z, phi), k)
        phi = phi - residual.homogeneous_part(k) * inv
    return phi


def _substitution(chart: LocalChart, z: list[Poly], phi: Poly) -> list[Poly]:
    subs, k = [], 0
    for i in range(chart.n):
        if i == chart.solve_for:
            subs.append(phi)
        else:
            subs.append(z[k])
            k += 1
    return subs


def restrict_to_hypersurface(chart: LocalChart, g: Poly, deg: int | None = None,
                             phi: Poly | None = None) -> Poly:
    """g(z, phi(z)) truncated at total degree ``deg`` (a polynomial in the free variables).

    ``phi`` may carry a precomputed ``implicit_solution(chart, D)`` for D >= deg.
    """
    if g.nvars != chart.n:
        raise ValueError("section has wrong number of variables")
    D = chart.default_truncation(g) if deg is None else deg
    if D < 1:
        raise ValueError("truncation degree must be >= 1")
    phi = implicit_solution(chart, D) if phi is None else phi.truncate(D)
    z = Poly.gens(chart.n - 1)
    return g.compose(_substitution(chart, z, phi), D).truncate(D)


def local_order(chart: LocalChart, g: Poly, deg: int | None = None,
                phi: Poly | None = None) -> int | Undetermined:
    D = chart.default_truncation(g) if deg is None else deg
    r = restrict_to_hypersurface(chart, g, D, phi)
    k = r.min_degree()
    return Undetermined(D) if k is None else k


def require_order(value) -> int:
    if isinstance(value, Undetermined):
        raise OrderUndetermined(f"order exceeds truncation bound {value.bound}")
    return value


# ---------------------------------------------------------------------------
# Measures
# ---------------------------------------------------------------------------

Point = tuple  # of Fractions


def _pt(p) -> Point:
    return tuple(Fraction(x) for x in p)


@dataclass(frozen=True)
class LebesgueCell:
    """Simplex conv(vertices) + cone(rays) carrying a constant density."""

    vertices: tuple[Point, ...]
    rays: tuple[tuple[int, ...], ...] = ()

    @classmethod
    def of(cls, vertices, rays=()) -> "LebesgueCell":
        vs = tuple(sorted(_pt(v) for v in vertices))
        rs = tuple(sorted(la.primitive(r) for r in rays))
        if len(set(vs)) != len(vs):
            raise ValueError("repeated cell vertex")
        dirs = [la.sub(v, vs[0]) for v in vs[1:]] + [_pt(r) for r in rs]
        if dirs and la.rank(dirs) != len(dirs):
            raise ValueError("cell generators must be affinely independent (simplicial cells only)")
        return cls(vs, rs)

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1 + len(self.rays)

    @property
    def bounded(self) -> bool:
        return not self.rays

    def volume(self) -> Fraction:
        """Lattice-normalized volume (unimodular simplex = 1); bounded cells only."""
        if not self.bounded:
            raise ValueError("unbounded cell has infinite volume")
        v0 = self.vertices[0]
        edges = [la.sub(v, v0) for v in self.vertices[1:]]
        if not edges:
            return Fraction(1)
        n = len(v0)
        # normalized w.r.t. the saturated lattice of the direction space
        B = la.saturated_basis(edges, n)
        X = [la.coords_in_basis(B, e) for e in edges]
        return abs(la.det(X))

    def directions(self) -> list[tuple]:
        v0 = self.vertices[0]
        return [la.sub(v, v0) for v in self.vertices[1:]] + [_pt(r) for r in self.rays]

    def to_json(self) -> dict:
        return {
            "vertices": [[format_scalar(x) for x in v] for v in self.vertices],
            "rays": [list(r) for r in self.rays],
        }

    @classmethod
    def from_json(cls, obj) -> "LebesgueCell":
        return cls.of([[parse_scalar(x) for x in v] for v in obj["vertices"]], obj.get("rays", []))


@dataclass(frozen=True)
class ComplexMeasure:
    """Either atomic (``atoms``) or Lebesgue (``cells``); stored in canonical merged form."""

    kind: str  # "atomic" | "lebesgue"
    n: int
    atoms: tuple[tuple[Point, Fraction], ...] = ()
    cells: tuple[tuple[LebesgueCell, Fraction], ...] = ()

    def __post_init__(self):
        if self.kind not in ("atomic", "lebesgue"):
            raise ValueError("kind must be 'atomic' or 'lebesgue'")
        if any(m < 0 for _, m in self.atoms) or any(d < 0 for _, d in self.cells):
            raise ValueError("masses and densities must be nonnegative")

    @classmethod
    def atomic(cls, n: int, atoms) -> "ComplexMeasure":
        acc: dict = {}
        for p, m in atoms:
            p = _pt(p)
            if len(p) != n:
                raise ValueError("atom has wrong dimension")
            acc[p] = acc.get(p, Fraction(0)) + Fraction(m)
        return cls("atomic", n, atoms=tuple(sorted((p, m) for p, m in acc.items() if m != 0)))

    @classmethod
    def lebesgue(cls, n: int, cells) -> "ComplexMeasure":
        acc: dict = {}
        for c, d in cells:
            if not isinstance(c, LebesgueCell):
                c = LebesgueCell.of(*c)
            acc[c] = acc.get(c, Fraction(0)) + Fraction(d)
        items = sorted(((c, d) for c, d in acc.items() if d != 0), key=lambda t: (t[0].vertices, t[0].rays))
        return cls("lebesgue", n, cells=tuple(items))

    @classmethod
    def empty(cls, n: int) -> "ComplexMeasure":
        return cls("atomic", n)

    def scaled(self, k) -> "ComplexMeasure":
        k = Fraction(k)
        if self.kind == "atomic":
            return ComplexMeasure.atomic(self.n, [(p, m * k) for p, m in self.atoms])
        return ComplexMeasure.lebesgue(self.n, [(c, d * k) for c, d in self.cells])

    def to_json(self) -> dict:
        if self.kind == "atomic":
            return {
                "kind": "atomic",
                "n": self.n,
                "atoms": [{"anchor": [format_scalar(x) for x in p], "mass": format_scalar(m)} for p, m in self.atoms],
            }
        return {
            "kind": "lebesgue",
            "n": self.n,
            "cells": [dict(c.to_json(), density=format_scalar(d)) for c, d in self.cells],
        }

    @classmethod
    def from_json(cls, obj) -> "ComplexMeasure":
        n = int(obj["n"])
        if obj["kind"] == "atomic":
            return cls.atomic(n, [([parse_scalar(x) for x in a["anchor"]], parse_scalar(a["mass"])) for a in obj["atoms"]])
        return cls.lebesgue(n, [(LebesgueCell.from_json(c), parse_scalar(c["density"])) for c in obj["cells"]])


@dataclass(frozen=True)
class MassReport:
    total: Fraction
    parts: tuple[Fraction, ...]
    unbounded_support: bool = False

    def to_json(self) -> dict:
        return {
            "total": format_scalar(self.total),
            "parts": [format_scalar(p) for p in self.parts],
            "unbounded_support": self.unbounded_support,
        }


def total_mass(m: ComplexMeasure) -> MassReport:
    if m.kind == "atomic":
        parts = tuple(mass for _, mass in m.atoms)
        return MassReport(sum(parts, Fraction(0)), parts)
    parts, unbounded = [], False
    for c, d in m.cells:
        if c.bounded:
            parts.append(d * c.volume())
        else:
            unbounded = True
    return MassReport(sum(parts, Fraction(0)), tuple(parts), unbounded)


def atomic_measure(anchor, chart: LocalChart, s: Poly, N: int, ell: PLFunction,
                   deg: int | None = None) -> ComplexMeasure:
    """Single atom at ``anchor`` with mass local_order(s)/N; the anchor must lie on corner_locus(ell)."""
    if N < 1:
        raise ValueError("N must be a positive integer")
    anchor = _pt(anchor)
    if len(eval_pl(ell, anchor)[1]) < 2:
        raise AnchorOffCornerLocus(f"anchor {[str(x) for x in anchor]} is not on the corner locus")
    order = require_order(local_order(chart, s, deg))
    return ComplexMeasure.atomic(len(anchor), [(anchor, Fraction(order, N))])


# ---------------------------------------------------------------------------
# Pushforward / pullback
# ---------------------------------------------------------------------------


def _cell_of(phi: PLMap, cell: LebesgueCell):
    """The unique map cell containing a whole measure cell (region is convex)."""
    for mc in phi.cells:
        if all(mc.contains(v) for v in cell.vertices) and all(
            la.dot(a, r) >= 0 for a, _ in mc.region for r in cell.rays
        ):
            return mc
    raise NotCellwiseInjective("measure cell is not contained in a single cell of the map")


def _apply_linear(A, v):
    return tuple(la.dot(row, v) for row in A)


def pushforward(phi: PLMap, m: ComplexMeasure, mode: str = "transport") -> ComplexMeasure:
    """Push m forward along phi.

    Atoms move to their images with unchanged mass.  Lebesgue densities are
    either transported unchanged along the cell identification C -> phi(C)
    (``mode="transport"``, the convention under which phi_* phi^* = delta) or
    rescaled by vol(C)/vol(phi C) so total mass is preserved (``mode="jacobian"``).
    """
    if m.n != phi.source_dim:
        raise ValueError("measure dimension does not match map source")
    if mode not in ("transport", "jacobian"):
        raise ValueError("mode must be 'transport' or 'jacobian'")
    if m.kind == "atomic":
        return ComplexMeasure.atomic(phi.target_dim, [(phi(p), mass) for p, mass in m.atoms])
    out = []
    for c, d in m.cells:
        mc = _cell_of(phi, c)
        dirs = c.directions()
        img_dirs = [_apply_linear(mc.matrix, x) for x in dirs]
        if dirs and la.rank(img_dirs) != len(dirs):
            raise NotCellwiseInjective("map collapses a measure cell")
        if any(not any(x) for x in img_dirs):
            raise NotCellwiseInjective("map collapses a measure cell")
        image = LebesgueCell.of([mc.apply(v) for v in c.vertices], [_apply_linear(mc.matrix, r) for r in c.rays])
        if mode == "jacobian" and c.bounded:
            d = d * c.volume() / image.volume()
        elif mode == "jacobian":
            d = d / _linear_factor(mc.matrix, dirs)
        out.append((image, d))
    return ComplexMeasure.lebesgue(phi.target_dim, out)


def _linear_factor(A, dirs) -> Fraction:
    """Lattice-volume scaling of A restricted to span(dirs)."""
    n = len(dirs[0])
    B = la.saturated_basis(dirs, n)
    img = [_apply_linear(A, b) for b in B]
    Bi = la.saturated_basis(img, len(img[0]))
    return abs(la.det([la.coords_in_basis(Bi, x) for x in img]))


def preimage_point(phi: PLMap, x) -> Point:
    x = _pt(x)
    found = set()
    for mc in phi.cells:
        if la.det(mc.matrix) == 0:
            raise NotCellwiseInjective("map is not injective on a cell (zero determinant)")
        y = la.solve(mc.matrix, la.sub(x, mc.shift))
        if y is not None and mc.contains(y):
            found.add(y)
    if not found:
        raise NoPreimage(f"point {[str(v) for v in x]} has no preimage")
    if len(found) > 1:
        raise NotCellwiseInjective("point has several preimages")
    return found.pop()


def pullback_measure(phi: PLMap, m: ComplexMeasure) -> ComplexMeasure:
    """Pull m back along phi: masses/densities are multiplied by |det A| of the cell.

    Lebesgue: the density on phi^{-1}(C) is |det A| times the density on C
    (dl_1 ^ ... ^ dl_n = delta dy_1 ^ ... ^ dy_n).  Atomic: each atom moves to
    its unique preimage and its mass is multiplied by |det A| as well, so the
    projection formula phi_* phi^* m = delta m holds for both kinds.
    """
    if phi.source_dim != phi.target_dim:
        raise NotCellwiseInjective("pullback needs equal source and target dimension")
    if m.n != phi.target_dim:
        raise ValueError("measure dimension does not match map target")
    if m.kind == "atomic":
        out = []
        for p, mass in m.atoms:
            y = preimage_point(phi, p)
            out.append((y, mass * abs(la.det(phi.cell_at(y).matrix))))
        return ComplexMeasure.atomic(phi.source_dim, out)
    out = []
    for c, d in m.cells:
        hits = []
        for mc in phi.cells:
            det = la.det(mc.matrix)
            if det == 0:
                raise NotCellwiseInjective("map is not injective on a cell (zero determinant)")
            inv = la.inverse(mc.matrix)
            verts = [_apply_linear(inv, la.sub(v, mc.shift)) for v in c.vertices]
            rays = [_apply_linear(inv, r) for r in c.rays]
            pre = LebesgueCell.of(verts, rays)
            if all(mc.contains(v) for v in pre.vertices) and all(
                la.dot(a, r) >= 0 for a, _ in mc.region for r in pre.rays
            ):
                hits.append((pre, d * abs(det)))
        if not hits:
            raise NoPreimage("measure cell has no preimage cell")
        if len(hits) > 1:
            raise NotCellwiseInjective("measure cell has several preimage cells")
        out.append(hits[0])
    return ComplexMeasure.lebesgue(phi.source_dim, out)


def projection_formula_holds(phi: PLMap, m: ComplexMeasure, delta: int) -> bool:
    return pushforward(phi, pullback_measure(phi, m)) == m.scaled(delta)
