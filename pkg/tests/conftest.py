"""Shared random generators and brute-force oracles for the test-suite."""

from __future__ import annotations

import random
import time
from contextlib import contextmanager
from fractions import Fraction

import pytest

from tropmob import linalg as la
from tropmob.entropy import DEFAULT_SIMPLEX, MeasureFamily, Member
from tropmob.lattice import LiftedLaurentPolynomial
from tropmob.measures import ComplexMeasure, LebesgueCell
from tropmob.pl import PLFunction, PLMap, tropicalize_monomial_map


@contextmanager
def stopwatch():
    box = {}
    start = time.perf_counter()
    yield box
    box["secs"] = time.perf_counter() - start


def report(tag: str, ok: bool, detail: str, secs: float) -> None:
    print(f"[{tag}] {'PASS' if ok else 'FAIL'} {detail} ({secs:.2f}s)")


# ---------------------------------------------------------------------------
# random data
# ---------------------------------------------------------------------------


def random_support(rng: random.Random, max_points: int = 12, box: int = 3, n: int = 2):
    """A full-dimensional lifted support in Z^n with at most ``max_points`` points."""
    while True:
        k = rng.randint(n + 1, max_points)
        pts = set()
        while len(pts) < k:
            pts.add(tuple(rng.randint(0, box) for _ in range(n)))
        pts = sorted(pts)
        if la.affine_rank(pts) == n:
            lifts = [Fraction(rng.randint(-5, 5), rng.choice((1, 1, 2))) for _ in pts]
            return LiftedLaurentPolynomial.build(n, list(zip(pts, lifts)))


def random_unimodular_like(rng: random.Random, dim: int, max_det: int = 10):
    """Integer matrix with 1 <= |det| <= max_det."""
    while True:
        A = [[rng.randint(-3, 3) for _ in range(dim)] for _ in range(dim)]
        d = abs(la.det(A))
        if 1 <= d <= max_det:
            return A


def random_single_cell_map(rng: random.Random, dim: int = 2) -> PLMap:
    A = random_unimodular_like(rng, dim)
    shift = [Fraction(rng.randint(-4, 4), rng.choice((1, 2, 3))) for _ in range(dim)]
    return tropicalize_monomial_map(A, shift)


def rand_q(rng: random.Random, lo: int = -6, hi: int = 6) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.choice((1, 2, 3, 4)))


def random_measure(rng: random.Random, dim: int) -> ComplexMeasure:
    if rng.random() < 0.5:
        atoms = [(tuple(rand_q(rng) for _ in range(dim)), Fraction(rng.randint(1, 9), rng.randint(1, 5)))
                 for _ in range(rng.randint(1, 4))]
        return ComplexMeasure.atomic(dim, atoms)
    cells = []
    for _ in range(rng.randint(1, 3)):
        while True:
            k = rng.randint(1, dim)  # cell dimension
            nrays = rng.randint(0, k)
            vs = [tuple(rand_q(rng) for _ in range(dim)) for _ in range(k - nrays + 1)]
            rs = [tuple(rng.randint(-2, 2) for _ in range(dim)) for _ in range(nrays)]
            dirs = [la.sub(v, vs[0]) for v in vs[1:]] + [tuple(Fraction(x) for x in r) for r in rs]
            if len(set(vs)) == len(vs) and la.rank(dirs) == len(dirs):
                cells.append((LebesgueCell.of(vs, rs), Fraction(rng.randint(1, 9), rng.randint(1, 4))))
                break
    return ComplexMeasure.lebesgue(dim, cells)


def tropical_line_at(v) -> PLFunction:
    """min(0, y1 - v1, y2 - v2): a tropical line with vertex v."""
    a, b = Fraction(v[0]), Fraction(v[1])
    return PLFunction.of(2, [((0, 0), 0), ((1, 0), -a), ((0, 1), -b)])


def _inside_default_simplex(p) -> bool:
    x, y = p
    return x >= -1 and y >= -1 and x + y <= 2


def random_family(rng: random.Random, size: int | None = None, M=None) -> MeasureFamily:
    """Random members (tropical line, atoms on its legs inside Π) with masses <= M."""
    M = Fraction(M if M is not None else rng.randint(1, 6))
    members = []
    for _ in range(size or rng.randint(1, 8)):
        v = (Fraction(rng.randint(-2, 2), 4), Fraction(rng.randint(-2, 2), 4))
        ell = tropical_line_at(v)
        legs = [(1, 0), (0, 1), (-1, -1)]
        pts = [v]
        for _ in range(rng.randint(0, 3)):
            d = rng.choice(legs)
            s = Fraction(rng.randint(1, 4), 4)
            p = (v[0] + s * d[0], v[1] + s * d[1])
            if _inside_default_simplex(p):
                pts.append(p)
        weights = [Fraction(rng.randint(1, 5)) for _ in pts]
        total = M * Fraction(rng.randint(1, 8), 8)
        scale = total / sum(weights)
        members.append(Member(ell, ComplexMeasure.atomic(2, [(p, w * scale) for p, w in zip(pts, weights)])))
    return MeasureFamily.of(DEFAULT_SIMPLEX, M, members, "random")


# ---------------------------------------------------------------------------
# oracles
# ---------------------------------------------------------------------------


def brute_argmin(ell: PLFunction, y) -> frozenset:
    """Indices (into ell.canonical().pieces) attaining the minimum, by direct evaluation."""
    c = ell.canonical()
    vals = [sum(Fraction(a) * Fraction(b) for a, b in zip(e, y)) + Fraction(k) for e, k in c.pieces]
    m = min(vals)
    return frozenset(i for i, v in enumerate(vals) if v == m)


def shoelace_area2(points) -> Fraction:
    """Twice the area of the convex hull of plane points (monotone chain)."""
    pts = sorted(set((Fraction(x), Fraction(y)) for x, y in points))
    if len(pts) < 3:
        return Fraction(0)

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    s = Fraction(0)
    for i in range(len(hull)):
        x1, y1 = hull[i]
        x2, y2 = hull[(i + 1) % len(hull)]
        s += x1 * y2 - x2 * y1
    return abs(s)


@pytest.fixture
def rng():
    return random.Random(20240601)
