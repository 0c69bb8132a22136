"""Numerical amoebas of plane curves and their distance to the tropical curve.

The lifted polynomial f = Σ a_j x^j with lifts v(j) is realized at parameter
0 < t < 1 as f_t = Σ a_j t^{v(j)} x^j and mapped by Log_t(x) = (log|x_1|/log t,
log|x_2|/log t).  With this pairing the term magnitudes are t^{v(j) + <j, y>},
so as t -> 0 the amoeba converges to the corner locus of the min-plus
tropicalization min_j (v(j) + <j, y>).

Floating point is confined to this module.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import BudgetExhausted, NoRoots
from .lattice import LiftedLaurentPolynomial
from .pl import CornerLocus, corner_locus, tropicalize

DEFAULT_BOX = (-4.0, 4.0)
ROOT_TOL = 1e-10
RESIDUAL_TOL = 1e-8


@dataclass(frozen=True)
class AmoebaSample:
    t: float
    points: np.ndarray  # shape (m, 2), sorted lexicographically
    seed: int
    count: int
    box: tuple[float, float]
    rejected: int = 0

    def to_json(self) -> dict:
        return {
            "t": _g(self.t),
            "seed": self.seed,
            "count": self.count,
            "box": [_g(self.box[0]), _g(self.box[1])],
            "rejected_roots": self.rejected,
            "points": [[_g(a), _g(b)] for a, b in self.points.tolist()],
        }

    @classmethod
    def from_json(cls, obj) -> "AmoebaSample":
        pts = np.array([[float(a), float(b)] for a, b in obj["points"]], dtype=float).reshape(-1, 2)
        return cls(float(obj["t"]), pts, int(obj["seed"]), int(obj["count"]),
                   (float(obj["box"][0]), float(obj["box"][1])), int(obj.get("rejected_roots", 0)))

    def __eq__(self, other):
        return (
            isinstance(other, AmoebaSample)
            and (self.t, self.seed, self.count, self.box, self.rejected)
            == (other.t, other.seed, other.count, other.box, other.rejected)
            and np.array_equal(self.points, other.points)
        )


def _g(x: float) -> str:
    return format(float(x), ".17g")


def _realize(f: LiftedLaurentPolynomial, t: float):
    """Numerical terms (j1, j2, c_j t^{v(j)})."""
    return [(int(term.exp[0]), int(term.exp[1]), float(term.coeff) * t ** float(term.lift)) for term in f.terms]


def _fiber_roots(terms, solve: int, fixed: complex):
    """Roots in the torus of f restricted to the fiber where the other coordinate is ``fixed``."""
    other = 1 - solve
    lo = min(tm[solve] for tm in terms)
    hi = max(tm[solve] for tm in terms)
    coeffs = np.zeros(hi - lo + 1, dtype=complex)
    for tm in terms:
        coeffs[hi - tm[solve]] += tm[2] * fixed ** tm[other]
    # strip vanishing leading/trailing coefficients (roots at infinity / zero)
    scale = max(abs(c) for c in coeffs) if len(coeffs) else 0.0
    if scale == 0.0:
        raise NoRoots("fiber polynomial vanishes identically")
    nz = np.nonzero(np.abs(coeffs) > ROOT_TOL * scale)[0]
    coeffs = coeffs[nz[0]: nz[-1] + 1]
    if len(coeffs) < 2:
        raise NoRoots("fiber polynomial has no roots in the torus")
    return np.roots(coeffs)


def _residual_ok(terms, x1: complex, x2: complex) -> bool:
    vals = [c * x1**a * x2**b for a, b, c in terms]
    return abs(sum(vals)) <= RESIDUAL_TOL * max(abs(v) for v in vals)


def _newton(terms, solve: int, fixed: complex, z: complex) -> complex:
    for _ in range(3):
        val, der = 0j, 0j
        for tm in terms:
            a, b, c = tm
            j_s, j_o = (a, b) if solve == 0 else (b, a)
            base = c * fixed**j_o
            val += base * z**j_s
            if j_s:
                der += base * j_s * z ** (j_s - 1)
        if der == 0:
            break
        z = z - val / der
    return z


def sample_amoeba(f: LiftedLaurentPolynomial, t: float, count: int, seed: int = 0,
                  box: Sequence[float] = DEFAULT_BOX, budget: int | None = None) -> AmoebaSample:
    """Log_t images of torus points of {f_t = 0} over ``count`` random fibers.

    Each fiber fixes one coordinate with Log_t-value uniform in ``box`` and a
    uniform argument, then solves for the other coordinate with numpy's
    companion-matrix root finder.  Fiber i draws from the stream
    ``default_rng([seed, i])``, so the sample is deterministic.
    """
    if f.n != 2:
        raise ValueError("amoeba sampling is implemented for plane curves (n = 2)")
    if len(f.terms) < 2:
        raise ValueError("a single monomial has no zeros in the torus")
    if not 0.0 < t < 1.0:
        raise ValueError("t must lie strictly between 0 and 1")
    if count < 1:
        raise ValueError("count must be positive")
    terms = _realize(f, t)
    solve = 1 if len({tm[1] for tm in terms}) > 1 else 0
    lo, hi = float(box[0]), float(box[1])
    log_t = math.log(t)
    budget = budget if budget is not None else 4 * count
    pts, rejected, fibers, attempts = [], 0, 0, 0
    while fibers < count:
        if attempts >= budget:
            raise BudgetExhausted(f"only {fibers} of {count} fibers produced roots within budget {budget}")
        rng = np.random.default_rng([seed, attempts])
        attempts += 1
        y_fixed = rng.uniform(lo, hi)
        theta = rng.uniform(0.0, 2.0 * math.pi)
        fixed = complex(math.exp(y_fixed * log_t) * math.cos(theta), math.exp(y_fixed * log_t) * math.sin(theta))
        try:
            roots = _fiber_roots(terms, solve, fixed)
        except NoRoots:
            continue
        fibers += 1
        for z in roots:
            if z == 0 or not np.isfinite(z):
                continue
            z = _newton(terms, solve, fixed, complex(z))
            x1, x2 = (z, fixed) if solve == 0 else (fixed, z)
            if x1 == 0 or x2 == 0 or not _residual_ok(terms, x1, x2):
                rejected += 1
                continue
            pts.append((math.log(abs(x1)) / log_t + 0.0, math.log(abs(x2)) / log_t + 0.0))
    arr = np.array(sorted(pts), dtype=float).reshape(-1, 2)
    return AmoebaSample(float(t), arr, int(seed), int(count), (lo, hi), rejected)


# ---------------------------------------------------------------------------
# Distance to the corner locus
# ---------------------------------------------------------------------------


def _piece_distance(P: np.ndarray, piece) -> np.ndarray:
    """Euclidean distance from the rows of P to one 1-dimensional locus piece."""
    v = np.array([float(x) for x in piece.vertices[0]])
    if piece.lineality:
        d = np.array(piece.lineality[0], dtype=float)
        lo, hi = -np.inf, np.inf
    elif piece.rays:
        d = np.array(piece.rays[0], dtype=float)
        lo, hi = 0.0, np.inf
    elif len(piece.vertices) == 2:
        w = np.array([float(x) for x in piece.vertices[1]])
        d = w - v
        lo, hi = 0.0, 1.0
    else:  # isolated point
        return np.linalg.norm(P - v, axis=1)
    s = np.clip(((P - v) @ d) / (d @ d), lo, hi)
    return np.linalg.norm(P - (v + s[:, None] * d), axis=1)


def distances_to_locus(points: np.ndarray, locus: CornerLocus) -> np.ndarray:
    if locus.n != 2:
        raise ValueError("distance computation implemented for n = 2")
    if len(points) == 0:
        return np.zeros(0)
    if locus.is_empty():
        return np.full(len(points), np.inf)
    return np.min(np.stack([_piece_distance(points, p) for p in locus.pieces]), axis=0)


def _inside(points: np.ndarray, box) -> np.ndarray:
    lo, hi = box
    return np.all((points >= lo) & (points <= hi), axis=1) if len(points) else np.zeros(0, dtype=bool)


def hausdorff_to_tropical(sample: AmoebaSample | np.ndarray, locus: CornerLocus,
                          box: Sequence[float] = DEFAULT_BOX) -> float:
    """One-sided Hausdorff distance sup_{p in sample ∩ box} dist(p, locus)."""
    pts = sample.points if isinstance(sample, AmoebaSample) else np.asarray(sample, dtype=float).reshape(-1, 2)
    pts = pts[_inside(pts, box)]
    if len(pts) == 0:
        return 0.0
    return float(np.max(distances_to_locus(pts, locus)))


@dataclass(frozen=True)
class ConvergenceProfile:
    entries: tuple[tuple[float, float, float], ...]  # (t, distance, inlier fraction)
    box: tuple[float, float]
    count: int
    seed: int

    @property
    def distances(self) -> list[float]:
        return [d for _, d, _ in self.entries]

    def non_increasing(self, tolerance: float = 0.1) -> bool:
        ds = self.distances
        return all(b <= a * (1.0 + tolerance) for a, b in zip(ds, ds[1:]))

    def to_json(self) -> dict:
        return {
            "box": [_g(self.box[0]), _g(self.box[1])],
            "count": self.count,
            "seed": self.seed,
            "direction": "one-sided: sample -> corner locus (clipped to box)",
            "profile": [{"t": _g(t), "distance": _g(d), "inlier_fraction": _g(q)} for t, d, q in self.entries],
        }


def convergence_profile(f: LiftedLaurentPolynomial, ts: Sequence[float], count: int, seed: int = 0,
                        box: Sequence[float] = DEFAULT_BOX) -> ConvergenceProfile:
    ts = [float(t) for t in ts]
    if not ts or any(b >= a for a, b in zip(ts, ts[1:])):
        raise ValueError("t values must be strictly decreasing")
    locus = corner_locus(tropicalize(f))
    box = (float(box[0]), float(box[1]))
    entries = []
    for t in ts:
        s = sample_amoeba(f, t, count, seed, box)
        inside = _inside(s.points, box)
        frac = float(np.mean(inside)) if len(inside) else 0.0
        entries.append((t, hausdorff_to_tropical(s, locus, box), frac))
    return ConvergenceProfile(tuple(entries), box, count, seed)


def write_csv(sample: AmoebaSample, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "y1", "y2"])
        for a, b in sample.points.tolist():
            w.writerow([_g(sample.t), _g(a), _g(b)])


def write_json(sample: AmoebaSample, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(sample.to_json(), fh, indent=1)
        fh.write("\n")
