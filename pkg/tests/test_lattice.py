"""lattice: Newton polytopes, regular subdivisions, dual complexes, balancing."""

from __future__ import annotations

import dataclasses
import itertools
import random
from fractions import Fraction

import pytest

from conftest import random_support, shoelace_area2
from tropmob import linalg as la
from tropmob.errors import DegenerateDual
from tropmob.lattice import (DualComplex, LiftedLaurentPolynomial, check_balancing, convex_hull, dual_complex,
                             is_unimodular_triangulation, lower_hull_subdivision, subdivision_faces,
                             support_polytope)
from tropmob.lp import maximize
from tropmob.mobility import segre_quartic

SQUARE = LiftedLaurentPolynomial.build(2, [((0, 0), 0), ((1, 0), 0), ((0, 1), 0), ((1, 1), 1)])
LINE = LiftedLaurentPolynomial.build(2, [((0, 0), 0), ((1, 0), 0), ((0, 1), 0)])


# ---------------------------------------------------------------------------
# oracles
# ---------------------------------------------------------------------------


def extreme_points_oracle(points):
    """p is extreme iff it is not a convex combination of the other points (LP feasibility)."""
    pts = [tuple(Fraction(x) for x in p) for p in points]
    out = set()
    for i, p in enumerate(pts):
        others = [q for j, q in enumerate(pts) if j != i and q != p]
        if not others:
            out.add(p)
            continue
        A_eq = [[q[k] for q in others] for k in range(len(p))] + [[Fraction(1)] * len(others)]
        b_eq = list(p) + [Fraction(1)]
        A_ub = [[-Fraction(int(j == k)) for j in range(len(others))] for k in range(len(others))]
        res = maximize([0] * len(others), A_ub, [0] * len(others), A_eq, b_eq)
        if res.status == "infeasible":
            out.add(p)
    return out


def lower_facets_oracle(f: LiftedLaurentPolynomial):
    """Brute force in R^3: every triple spanning a non-vertical plane with all lifted points on/above."""
    pts = f.support
    h = f.lifts
    cells = set()
    for i, j, k in itertools.combinations(range(len(pts)), 3):
        M = [[Fraction(pts[a][0]), Fraction(pts[a][1]), Fraction(1)] for a in (i, j, k)]
        coef = la.solve(M, [h[i], h[j], h[k]])
        if coef is None:
            continue
        vals = [coef[0] * p[0] + coef[1] * p[1] + coef[2] for p in pts]
        if all(hq >= v for hq, v in zip(h, vals)):
            cells.add(frozenset(q for q, (hq, v) in enumerate(zip(h, vals)) if hq == v))
    return cells


# ---------------------------------------------------------------------------
# support_polytope
# ---------------------------------------------------------------------------


def test_polytope_examples():
    assert support_polytope(LINE).vertices == ((0, 0), (0, 1), (1, 0))
    one = support_polytope(LiftedLaurentPolynomial.build(1, [((5,), 0)]))
    assert one.vertices == ((5,),) and one.dim == 0


def test_segre_chart_vertices_match_extreme_point_oracle():
    q = segre_quartic()
    support = sorted({tuple(e[i] for i in (0, 1, 3, 4)) for e in q.terms})  # chart x2 = 1
    f = LiftedLaurentPolynomial.build(4, [(e, 0) for e in support])
    P = support_polytope(f)
    assert set(tuple(Fraction(x) for x in v) for v in P.vertices) == extreme_points_oracle(support)
    assert all(P.contains(p) for p in support)


def test_polytope_invariant_under_reordering_and_monomial_shift():
    rng = random.Random(11)
    for _ in range(30):
        f = random_support(rng)
        terms = list(f.terms)
        rng.shuffle(terms)
        g = LiftedLaurentPolynomial(2, tuple(terms))
        assert support_polytope(g) == support_polytope(f)
        s = (rng.randint(-3, 3), rng.randint(-3, 3))
        h = LiftedLaurentPolynomial.build(2, [(tuple(a + b for a, b in zip(t.exp, s)), t.lift) for t in f.terms])
        shifted = tuple(sorted(tuple(a + b for a, b in zip(v, s)) for v in support_polytope(f).vertices))
        assert support_polytope(h).vertices == shifted


def test_every_support_point_satisfies_facets():
    rng = random.Random(12)
    for _ in range(12):
        f = random_support(rng)
        P = support_polytope(f)
        assert all(P.contains(p) for p in f.support)
        assert set(tuple(Fraction(x) for x in v) for v in P.vertices) == extreme_points_oracle(f.support)


# ---------------------------------------------------------------------------
# lower_hull_subdivision
# ---------------------------------------------------------------------------


def test_square_splits_along_diagonal():
    s = lower_hull_subdivision(SQUARE)
    cells = sorted(sorted(s.cell_points(i)) for i in range(len(s.cells)))
    assert cells == [[(0, 0), (0, 1), (1, 0)], [(0, 1), (1, 0), (1, 1)]]
    assert is_unimodular_triangulation(s).ok


def test_flat_lift_single_cell():
    f = LiftedLaurentPolynomial.build(2, [((0, 0), 0), ((2, 0), 0), ((0, 2), 0), ((1, 1), 0), ((1, 0), 0)])
    s = lower_hull_subdivision(f)
    assert len(s.cells) == 1 and len(s.cells[0]) == 5


def test_one_dimensional_lower_hull():
    f = LiftedLaurentPolynomial.build(1, [((0,), 0), ((1,), 0), ((2,), 1)])
    s = lower_hull_subdivision(f)
    assert sorted(sorted(s.cell_points(i)) for i in range(len(s.cells))) == [[(0,), (1,)], [(1,), (2,)]]


def test_subdivision_matches_brute_force_and_covers_polygon():
    rng = random.Random(13)
    for _ in range(60):
        f = random_support(rng, max_points=8)
        s = lower_hull_subdivision(f)
        assert {frozenset(c) for c in s.cells} == lower_facets_oracle(f)
        # cells cover Delta: areas add up
        total = sum(shoelace_area2(s.cell_points(i)) for i in range(len(s.cells)))
        assert total == shoelace_area2(f.support)
        # strict regularity
        for cell, (a, c) in zip(s.cells, s.heights):
            for j, (p, h) in enumerate(zip(s.points, s.lifts)):
                g = la.dot(a, [Fraction(p[i]) for i in s.pivots]) + c
                assert (h == g) if j in cell else (h > g)


def test_unimodularity_examples():
    sq = LiftedLaurentPolynomial.build(2, [((0, 0), 0), ((1, 0), 0), ((0, 1), 0), ((1, 1), 0)])
    assert not is_unimodular_triangulation(lower_hull_subdivision(sq)).ok
    big = LiftedLaurentPolynomial.build(2, [((0, 0), 0), ((2, 0), 0), ((0, 1), 0)])
    v = is_unimodular_triangulation(lower_hull_subdivision(big))
    assert not v.ok and "volume 2" in v.message


# ---------------------------------------------------------------------------
# dual_complex and balancing
# ---------------------------------------------------------------------------


def test_tropical_line_dual():
    p = dual_complex(LINE)
    assert p.vertices == ((0, 0),)
    rays = sorted(r for fc in p.rays() for r in fc.rays)
    assert rays == [(-1, -1), (0, 1), (1, 0)]
    assert all(fc.weight == 1 for fc in p.top_faces())
    assert check_balancing(p).ok


def test_single_monomial_has_empty_dual():
    p = dual_complex(LiftedLaurentPolynomial.build(2, [((1, 2), 0)]))
    assert p.is_empty() and check_balancing(p).ok


def test_lower_dimensional_support_is_degenerate():
    with pytest.raises(DegenerateDual):
        dual_complex(LiftedLaurentPolynomial.build(2, [((0, 0), 0), ((1, 1), 0)]))


def test_square_dual_has_one_bounded_edge():
    p = dual_complex(SQUARE)
    (edge,) = p.bounded_edges()
    assert sorted(SQUARE.support[i] for i in edge.cell) == [(0, 1), (1, 0)]
    assert len(p.vertices) == 2 and len(p.rays()) == 4
    assert check_balancing(p).ok


def test_perturbed_weight_is_unbalanced():
    p = dual_complex(SQUARE)
    i = next(i for i, fc in enumerate(p.faces) if fc.dim == 1 and fc.bounded)
    faces = list(p.faces)
    faces[i] = dataclasses.replace(faces[i], weight=2)
    v = check_balancing(DualComplex(p.n, p.support, p.vertices, tuple(faces)))
    assert not v.ok and v.witness is not None


def test_duality_counts_and_balancing_random():
    rng = random.Random(14)
    for _ in range(100):
        f = random_support(rng)
        s = lower_hull_subdivision(f)
        p = dual_complex(f, s)
        edges = [F for F, d in subdivision_faces(s).items() if d == 1]
        interior = [F for F in edges if sum(F <= frozenset(c) for c in s.cells) == 2]
        assert len(p.vertices) == len(s.cells)
        assert len(p.bounded_edges()) == len(interior)
        assert len(p.rays()) == len(edges) - len(interior)
        assert check_balancing(p).ok


def test_three_dimensional_balancing():
    rng = random.Random(15)
    for _ in range(10):
        f = random_support(rng, max_points=7, box=2, n=3)
        p = dual_complex(f)
        assert check_balancing(p).ok


def test_json_round_trips():
    rng = random.Random(16)
    for _ in range(10):
        f = random_support(rng)
        assert LiftedLaurentPolynomial.from_json(f.to_json()) == f
        p = dual_complex(f)
        assert DualComplex.from_json(p.to_json()) == p


def test_hull_of_collinear_points_is_segment():
    h = convex_hull([(0, 0), (1, 1), (2, 2), (3, 3)])
    assert h.dim == 1 and sorted(h.vertex_ids) == [0, 3] and len(h.equations) == 1
