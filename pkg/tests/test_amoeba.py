"""amoeba: seeded sampling of plane amoebas and Hausdorff distance to the tropical curve."""

from __future__ import annotations

import math

import numpy as np
import pytest

from tropmob.amoeba import (AmoebaSample, convergence_profile, distances_to_locus, hausdorff_to_tropical,
                            sample_amoeba, write_csv, write_json)
from tropmob.errors import BudgetExhausted
from tropmob.fixtures import load_curve
from tropmob.lattice import LiftedLaurentPolynomial
from tropmob.pl import PLFunction, corner_locus, tropicalize

LINE_F = LiftedLaurentPolynomial.build(2, [((0, 0), 0), ((1, 0), 0), ((0, 1), 0)])
LINE_LOCUS = corner_locus(PLFunction.of(2, [((0, 0), 0), ((1, 0), 0), ((0, 1), 0)]))


def _triangle_ok(points, t, rel=1e-7):
    """Oracle for 1 + x1 + x2 = 0: the moduli 1, |x1|, |x2| satisfy the triangle inequalities."""
    a = np.power(t, points[:, 0])
    b = np.power(t, points[:, 1])
    one = np.ones_like(a)
    scale = np.maximum(np.maximum(a, b), one)
    return (np.all(one <= a + b + rel * scale) and np.all(a <= one + b + rel * scale)
            and np.all(b <= one + a + rel * scale))


def test_line_sample_lies_in_the_amoeba():
    s = sample_amoeba(LINE_F, 0.1, 2000, seed=0, box=(-3, 3))
    assert len(s.points) >= 2000 and _triangle_ok(s.points, 0.1)
    assert hausdorff_to_tropical(s, LINE_LOCUS, (-3, 3)) < 0.5


def test_sampling_is_deterministic():
    a = sample_amoeba(LINE_F, 0.2, 500, seed=7)
    b = sample_amoeba(LINE_F, 0.2, 500, seed=7)
    c = sample_amoeba(LINE_F, 0.2, 500, seed=8)
    assert a == b and a.points.tobytes() == b.points.tobytes()
    assert not np.array_equal(a.points, c.points)


def test_single_monomial_and_bad_parameters():
    with pytest.raises(ValueError):
        sample_amoeba(LiftedLaurentPolynomial.build(2, [((1, 1), 0)]), 0.1, 10)
    with pytest.raises(ValueError):
        sample_amoeba(LINE_F, 1.5, 10)
    with pytest.raises(ValueError):
        convergence_profile(LINE_F, (0.1, 0.2), 10)


def test_vertical_line_amoeba():
    f = LiftedLaurentPolynomial.build(2, [((0, 0), 0), ((1, 0), 0)])  # 1 + x1
    s = sample_amoeba(f, 0.1, 200, seed=1)
    assert np.allclose(s.points[:, 0], 0.0, atol=1e-12)


def test_budget_exhausted():
    f = LiftedLaurentPolynomial.build(2, [((0, 0), 0), ((0, 1), 0)])
    s = sample_amoeba(f, 0.1, 10, seed=0)  # 1 + x2: the horizontal line y2 = 0
    assert np.allclose(s.points[:, 1], 0.0, atol=1e-12)
    with pytest.raises(BudgetExhausted):
        sample_amoeba(LINE_F, 0.1, 10, seed=0, budget=3)


def test_distance_examples():
    assert hausdorff_to_tropical(np.array([[1.0, 1.0]]), LINE_LOCUS) == pytest.approx(1.0)
    on = np.array([[0.0, 0.0], [2.0, 0.0], [0.0, 3.5], [-1.5, -1.5]])
    assert hausdorff_to_tropical(on, LINE_LOCUS) == 0.0
    assert distances_to_locus(np.array([[-1.0, 1.0]]), LINE_LOCUS)[0] == pytest.approx(1.0)
    # outside the box nothing counts
    assert hausdorff_to_tropical(np.array([[9.0, 9.0]]), LINE_LOCUS, (-4, 4)) == 0.0


def test_preprojected_profile_is_zero():
    s = sample_amoeba(LINE_F, 0.1, 300, seed=2)
    loc = LINE_LOCUS
    P = s.points
    # project every point onto its nearest leg: the distance of the projection is exactly 0
    proj = []
    for x, y in P.tolist():
        cands = [(max(x, 0.0), 0.0), (0.0, max(y, 0.0)), (min((x + y) / 2, 0.0),) * 2]
        proj.append(min(cands, key=lambda c: math.hypot(c[0] - x, c[1] - y)))
    assert hausdorff_to_tropical(np.array(proj), loc) == pytest.approx(0.0, abs=1e-12)


def test_profile_line_strictly_decreasing():
    prof = convergence_profile(LINE_F, (0.5, 0.2, 0.1, 0.05), 1000, seed=0)
    ds = prof.distances
    assert all(b < a for a, b in zip(ds, ds[1:]))
    assert prof.non_increasing(0.1)


def test_square_sample_converges():
    f = load_curve("square")
    loc = corner_locus(tropicalize(f))
    far = hausdorff_to_tropical(sample_amoeba(f, 0.5, 1000, 0), loc)
    near = hausdorff_to_tropical(sample_amoeba(f, 0.02, 1000, 0), loc)
    assert near < far and near < 0.2


def test_artifacts_round_trip(tmp_path):
    s = sample_amoeba(LINE_F, 0.1, 50, seed=3)
    write_json(s, tmp_path / "s.json")
    import json

    back = AmoebaSample.from_json(json.loads((tmp_path / "s.json").read_text()))
    assert back == s
    write_csv(s, tmp_path / "s.csv")
    rows = (tmp_path / "s.csv").read_text().splitlines()
    assert rows[0] == "t,y1,y2" and len(rows) == len(s.points) + 1
