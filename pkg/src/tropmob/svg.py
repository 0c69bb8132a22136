"""Deterministic 800x800 SVG scenes for plane data (n = 2).

Layers, each with a fixed CSS class:
  ``subdivision`` — edges of a regular subdivision (drawn in exponent space),
  ``dual``        — edges/rays of a dual complex or corner locus, plus ``vertex`` markers,
  ``amoeba``      — sampled amoeba points.
Axes are drawn as a single ``path`` so that ``line`` elements count locus edges only.
"""

from __future__ import annotations

import os
import tempfile
from fractions import Fraction
from typing import Sequence

from .errors import DimensionUnsupported
from .lattice import DualComplex, RegularSubdivision, subdivision_faces
from .pl import CornerLocus

SIZE = 800
MARGIN = 20

STYLE = (
    ".axes{stroke:#bbb;stroke-width:1;fill:none}"
    ".subdivision{stroke:#2a7;stroke-width:2}"
    ".dual{stroke:#c22;stroke-width:2.5}"
    ".vertex{fill:#c22}"
    ".amoeba{fill:#236;fill-opacity:0.5}"
)


class _Frame:
    def __init__(self, box):
        self.lo, self.hi = float(box[0]), float(box[1])
        if not self.hi > self.lo:
            raise ValueError("box must satisfy lo < hi")
        self.k = (SIZE - 2 * MARGIN) / (self.hi - self.lo)

    def x(self, u) -> str:
        return f"{MARGIN + (float(u) - self.lo) * self.k:.3f}"

    def y(self, v) -> str:
        return f"{SIZE - MARGIN - (float(v) - self.lo) * self.k:.3f}"


def _clip(p, d, lo_s, hi_s, box):
    """Liang–Barsky clip of {p + s d : lo_s <= s <= hi_s} to the square box; None if empty."""
    lo, hi = float(box[0]), float(box[1])
    s0, s1 = lo_s, hi_s
    for pi, di in zip(p, d):
        if di == 0:
            if pi < lo or pi > hi:
                return None
            continue
        a, b = (lo - pi) / di, (hi - pi) / di
        if a > b:
            a, b = b, a
        s0, s1 = max(s0, a), min(s1, b)
    if s0 > s1:
        return None
    return (p[0] + s0 * d[0], p[1] + s0 * d[1]), (p[0] + s1 * d[0], p[1] + s1 * d[1])


def _segments_of_locus(locus: CornerLocus):
    segs, verts = [], set()
    inf = float("inf")
    for piece in locus.pieces:
        v = tuple(float(x) for x in piece.vertices[0])
        if piece.lineality:
            segs.append((v, tuple(float(x) for x in piece.lineality[0]), -inf, inf))
        elif piece.rays:
            segs.append((v, tuple(float(x) for x in piece.rays[0]), 0.0, inf))
            verts.add(piece.vertices[0])
        elif len(piece.vertices) == 2:
            w = tuple(float(x) for x in piece.vertices[1])
            segs.append((v, (w[0] - v[0], w[1] - v[1]), 0.0, 1.0))
            verts.update(piece.vertices)
    return segs, sorted(verts)


def _segments_of_dual(p: DualComplex):
    segs = []
    inf = float("inf")
    for fc in p.faces_of_dim(1):
        v = tuple(float(x) for x in p.vertices[fc.vertices[0]])
        if fc.bounded:
            w = tuple(float(x) for x in p.vertices[fc.vertices[1]])
            segs.append((v, (w[0] - v[0], w[1] - v[1]), 0.0, 1.0))
        else:
            for r in fc.rays:
                segs.append((v, tuple(float(x) for x in r), 0.0, inf))
    return segs, sorted(p.vertices)


def render_svg(box: Sequence[float] = (-4, 4), locus=None, points=None,
               subdivision: RegularSubdivision | None = None) -> str:
    for obj in (locus, subdivision):
        n = getattr(obj, "n", None) if obj is not None else None
        if obj is not None and isinstance(obj, RegularSubdivision):
            n = len(obj.points[0])
        if n is not None and n != 2:
            raise DimensionUnsupported(f"SVG scenes need n = 2, got n = {n}")
    if points is not None and len(points) and len(points[0]) != 2:
        raise DimensionUnsupported("SVG scenes need 2-dimensional points")
    fr = _Frame(box)
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">',
        f"<style>{STYLE}</style>",
        f'<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="#fff"/>',
    ]
    lo, hi = fr.lo, fr.hi
    axes = []
    if lo <= 0 <= hi:
        axes.append(f"M{fr.x(lo)} {fr.y(0)} L{fr.x(hi)} {fr.y(0)}")
        axes.append(f"M{fr.x(0)} {fr.y(lo)} L{fr.x(0)} {fr.y(hi)}")
    axes.append(f"M{fr.x(lo)} {fr.y(lo)} L{fr.x(hi)} {fr.y(lo)} L{fr.x(hi)} {fr.y(hi)} L{fr.x(lo)} {fr.y(hi)} Z")
    out.append(f'<path class="axes" d="{" ".join(axes)}"/>')
    if subdivision is not None:
        out.append('<g class="subdivision">')
        for F, d in sorted(subdivision_faces(subdivision).items(), key=lambda t: sorted(t[0])):
            if d != 1:
                continue
            a, b = (subdivision.points[i] for i in sorted(F))
            out.append(f'<line x1="{fr.x(a[0])}" y1="{fr.y(a[1])}" x2="{fr.x(b[0])}" y2="{fr.y(b[1])}"/>')
        out.append("</g>")
    if locus is not None:
        segs, verts = _segments_of_dual(locus) if isinstance(locus, DualComplex) else _segments_of_locus(locus)
        out.append('<g class="dual">')
        for p, d, s0, s1 in segs:
            c = _clip(p, d, s0, s1, box)
            if c is None:
                continue
            (x1, y1), (x2, y2) = c
            out.append(f'<line x1="{fr.x(x1)}" y1="{fr.y(y1)}" x2="{fr.x(x2)}" y2="{fr.y(y2)}"/>')
        out.append("</g>")
        out.append('<g class="vertex">')
        for v in verts:
            if all(lo <= float(Fraction(x)) <= hi for x in v):
                out.append(f'<circle cx="{fr.x(v[0])}" cy="{fr.y(v[1])}" r="4"/>')
        out.append("</g>")
    if points is not None:
        out.append('<g class="amoeba">')
        for a, b in (points.tolist() if hasattr(points, "tolist") else points):
            if lo <= a <= hi and lo <= b <= hi:
                out.append(f'<circle cx="{fr.x(a)}" cy="{fr.y(b)}" r="1.2"/>')
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_atomic(path, text: str) -> None:
    """Write via a temporary file in the same directory followed by rename."""
    path = os.fspath(path)
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def emit_svg(path, box: Sequence[float] = (-4, 4), locus=None, points=None,
             subdivision: RegularSubdivision | None = None) -> str:
    text = render_svg(box, locus, points, subdivision)
    write_atomic(path, text)
    return text
