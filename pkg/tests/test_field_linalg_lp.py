"""Exact scalars, linear algebra and the simplex method against sympy / brute-force oracles."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from tropmob import linalg as la
from tropmob.field import QuadraticNumber, format_scalar, parse_scalar, qnum
from tropmob.lp import maximize

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=12)


def _sym(x):
    if isinstance(x, QuadraticNumber):
        return sympy.Rational(x.a.numerator, x.a.denominator) + sympy.Rational(x.b.numerator, x.b.denominator) * sympy.sqrt(x.d)
    x = Fraction(x)
    return sympy.Rational(x.numerator, x.denominator)


@settings(max_examples=60, deadline=None)
@given(rationals, rationals, rationals, rationals)
def test_quadratic_field_matches_sympy(a, b, c, e):
    x, y = qnum(a, b, 2), qnum(c, e, 2)
    for got, want in ((x + y, _sym(x) + _sym(y)), (x - y, _sym(x) - _sym(y)), (x * y, _sym(x) * _sym(y))):
        assert sympy.expand(sympy.radsimp(_sym(got) - want)) == 0
    if y != 0:
        assert sympy.expand(sympy.radsimp(_sym(x / y) - _sym(x) / _sym(y))) == 0
    assert (x < y) == bool(_sym(x) < _sym(y)) or x == y


@settings(max_examples=60, deadline=None)
@given(rationals, rationals)
def test_scalar_format_round_trip(a, b):
    x = qnum(a, b, 5)
    assert parse_scalar(format_scalar(x)) == x
    assert parse_scalar(format_scalar(a)) == a


def test_quadratic_collapse_and_identity():
    alpha = qnum(1, 1, 2)
    assert alpha**4 - 6 * alpha**2 + 1 == 0
    assert isinstance(alpha * alpha.conjugate(), Fraction)
    assert (alpha - alpha) == 0 and isinstance(alpha - alpha, Fraction)


def test_parse_rejects_garbage_and_wrong_radicand():
    with pytest.raises(ValueError):
        parse_scalar("abc")
    with pytest.raises(ValueError):
        parse_scalar("1+2*sqrt(3)", d=2)


def _rand_matrix(rng, r, c, lo=-4, hi=4):
    return [[Fraction(rng.randint(lo, hi), rng.choice((1, 1, 2))) for _ in range(c)] for _ in range(r)]


def test_det_rank_nullspace_match_sympy():
    rng = random.Random(1)
    for _ in range(60):
        r, c = rng.randint(1, 4), rng.randint(1, 4)
        A = _rand_matrix(rng, r, c, -2, 2)
        S = sympy.Matrix([[_sym(x) for x in row] for row in A])
        assert la.rank(A) == S.rank()
        ns = la.nullspace(A, c)
        assert len(ns) == c - S.rank()
        for v in ns:
            assert all(x == 0 for x in la.matvec(A, v))
        if r == c:
            assert _sym(la.det(A)) == S.det()
            if la.det(A) != 0:
                inv = la.inverse(A)
                assert la.matmul(A, inv) == [[Fraction(int(i == j)) for j in range(r)] for i in range(r)]


def test_integer_kernel_and_primitive():
    A = [[1, 2, 3]]
    K = la.integer_kernel(A, 3)
    assert len(K) == 2
    for v in K:
        assert la.dot(A[0], v) == 0 and all(isinstance(x, int) for x in v)
    # the kernel lattice is saturated: its Gram determinant equals that of sympy's integer basis
    assert la.primitive((Fraction(2, 3), Fraction(-4, 3))) == (1, -2)


def test_lattice_volume_unimodular_and_scaled():
    assert la.lattice_volume([(1, 0), (0, 1)], 2) == 1
    assert la.lattice_volume([(2, 0), (0, 3)], 2) == 6
    assert la.lattice_volume([(1, 1, 0)], 3) == 1  # primitive edge has lattice length 1


def _brute_lp(c, A, b):
    """Maximum over vertices of {A x <= b} found by enumerating n-subsets of tight constraints."""
    n = len(c)
    best = None
    for rows in itertools.combinations(range(len(A)), n):
        M = [A[i] for i in rows]
        x = la.solve(M, [b[i] for i in rows])
        if x is None or any(la.dot(A[i], x) > b[i] for i in range(len(A))):
            continue
        v = la.dot(c, x)
        best = v if best is None or v > best else best
    return best


def test_simplex_matches_vertex_enumeration():
    rng = random.Random(2)
    for _ in range(60):
        n = rng.randint(1, 3)
        # bounded box plus random cuts
        A, b = [], []
        for i in range(n):
            e = [Fraction(int(i == j)) for j in range(n)]
            A += [e, [-x for x in e]]
            b += [Fraction(rng.randint(1, 5)), Fraction(rng.randint(1, 5))]
        for _ in range(rng.randint(0, 3)):
            A.append([Fraction(rng.randint(-3, 3)) for _ in range(n)])
            b.append(Fraction(rng.randint(0, 6)))
        c = [Fraction(rng.randint(-5, 5)) for _ in range(n)]
        res = maximize(c, A, b)
        assert res.status == "optimal"
        assert res.value == _brute_lp(c, A, b)


def test_simplex_infeasible_and_unbounded():
    assert maximize([1], [[1], [-1]], [1, -2]).status == "infeasible"
    assert maximize([1], [[-1]], [0]).status == "unbounded"
    res = maximize([1, 1], [[1, 0], [0, 1]], [1, 2], A_eq=[[1, -1]], b_eq=[0])
    assert res.status == "optimal" and res.value == 2
