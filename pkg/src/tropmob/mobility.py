"""Mobility-threshold certificates for pencils on hypersurface germs.

A certificate records, for a pencil M = <g_1, g_2> inside |L^N| and a marked
smooth point o (the origin of a :class:`~tropmob.measures.LocalChart`), the
local orders of the generators restricted to X and the resulting lower bound
mult_o(M)/N under one of two declared multiplicity conventions:

* ``"generic-member"``: order of a generic member sum(c_i g_i);
* ``"family-average"``: arithmetic mean of the generator orders.

Polynomial gcd, divisibility and rational root extraction are delegated to
sympy.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import sympy

from .errors import (
    ConventionMismatch,
    NotMobile,
    SamplingExhausted,
    UnsupportedRank,
)
from .field import QuadraticNumber, format_scalar, qnum
from .lattice import Verdict
from .measures import LocalChart, implicit_solution, local_order, require_order
from .poly import Poly

CONVENTIONS = ("generic-member", "family-average")

# ---------------------------------------------------------------------------
# sympy bridge
# ---------------------------------------------------------------------------


def _symbols(n: int):
    return sympy.symbols(f"x0:{n}")


def _scalar_to_sympy(c):
    if isinstance(c, QuadraticNumber):
        return sympy.Rational(c.a.numerator, c.a.denominator) + sympy.Rational(
            c.b.numerator, c.b.denominator
        ) * sympy.sqrt(c.d)
    c = Fraction(c)
    return sympy.Rational(c.numerator, c.denominator)


def to_sympy(p: Poly, syms=None) -> sympy.Poly:
    syms = syms or _symbols(p.nvars)
    expr = sympy.Integer(0)
    for e, c in p.terms.items():
        mono = sympy.Integer(1)
        for s, k in zip(syms, e):
            if k:
                mono *= s**k
        expr += _scalar_to_sympy(c) * mono
    d = p.radicand()
    domain = sympy.QQ.algebraic_field(sympy.sqrt(d)) if d else sympy.QQ
    return sympy.Poly(expr, *syms, domain=domain)


def _scalar_from_sympy(c, d: int | None):
    c = sympy.sympify(c)
    if not c.is_Rational:
        c = sympy.radsimp(sympy.expand(c))  # never nsimplify: it rewrites large rationals as radicals
    if d is None:
        r = sympy.Rational(c)
        return Fraction(int(r.p), int(r.q))
    a, b = sympy.Rational(0), sympy.Rational(0)
    for t in sympy.Add.make_args(sympy.expand(c)):
        coeff, rest = t.as_coeff_Mul()
        if rest == 1:
            a += coeff
        elif rest == sympy.sqrt(d):
            b += coeff
        else:
            raise ValueError(f"coefficient {c} outside Q(sqrt({d}))")
    return qnum(Fraction(int(a.p), int(a.q)), Fraction(int(b.p), int(b.q)), d)


def from_sympy(sp: sympy.Poly, nvars: int, d: int | None = None) -> Poly:
    terms = {}
    for mono, c in sp.as_dict().items():  # coefficients as sympy expressions
        terms[tuple(int(k) for k in mono)] = _scalar_from_sympy(c, d)
    return Poly(nvars, terms)


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic-normalized gcd (leading coefficient 1 in sympy's lex order)."""
    syms = _symbols(a.nvars)
    g = sympy.gcd(to_sympy(a, syms), to_sympy(b, syms))
    g = g.monic() if not g.is_zero else g
    return from_sympy(g, a.nvars, a.radicand() or b.radicand())


def divides(f: Poly, g: Poly) -> bool:
    """True iff f divides g (single-divisor division is exact membership in (f))."""
    syms = _symbols(g.nvars)
    _, r = sympy.div(to_sympy(g, syms), to_sympy(f, syms))
    return r.is_zero


def rational_roots(p: Poly) -> list[Fraction] | None:
    """Rational roots of a univariate polynomial; None if p is identically zero."""
    if p.is_zero():
        return None
    sp = to_sympy(p, sympy.symbols("s0:1"))
    roots = []
    for fac, _ in sp.factor_list()[1]:
        if fac.degree() == 1:
            a, b = fac.all_coeffs()
            r = -sympy.Rational(b) / sympy.Rational(a)
            roots.append(Fraction(int(r.p), int(r.q)))
    return sorted(set(roots))


# ---------------------------------------------------------------------------
# Linear systems and certificates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LinearSystemSpec:
    N: int
    generators: tuple[Poly, ...]
    chart: LocalChart
    truncation: int | None = None
    name: str = ""

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("N must be >= 1")
        if not self.generators:
            raise ValueError("a linear system needs at least one generator")
        for g in self.generators:
            if g.nvars != self.chart.n:
                raise ValueError("generator has wrong number of variables")
            if g.is_zero():
                raise ValueError("zero generator")
            if g.degree() > self.N:
                raise ValueError(
                    f"generator of degree {g.degree()} is not a section of L^{self.N} in the affine chart"
                )

    @property
    def degree(self) -> int:
        return self.truncation if self.truncation is not None else max(
            self.chart.default_truncation(g) for g in self.generators
        )

    def to_json(self, names: Sequence[str] | None = None) -> dict:
        return {
            "name": self.name,
            "N": self.N,
            "chart": self.chart.to_json(),
            "generators": [g.to_json() for g in self.generators],
            "truncation": self.degree,
        }

    @classmethod
    def from_json(cls, obj, d: int | None = None) -> "LinearSystemSpec":
        chart = LocalChart.from_json(obj["chart"], d)
        gens = tuple(Poly.from_json(g, d) for g in obj["generators"])
        return cls(int(obj["N"]), gens, chart, obj.get("truncation"), obj.get("name", ""))


def is_mobile_pencil(sys: LinearSystemSpec) -> Verdict:
    if len(sys.generators) != 2:
        raise UnsupportedRank(f"mobility test implemented for pencils only, got {len(sys.generators)} generators")
    g1, g2 = sys.generators
    g = poly_gcd(g1, g2)
    if g.degree() > 0:
        return Verdict(False, g, "generators share a nontrivial common factor")
    for gi in (g1, g2):
        if divides(sys.chart.f, gi):
            return Verdict(False, sys.chart.f, "a generator vanishes identically on X")
    return Verdict(True, g, "gcd is a unit and no generator is divisible by f")


def member_orders(sys: LinearSystemSpec, phi: Poly | None = None) -> list:
    D = sys.degree
    phi = implicit_solution(sys.chart, D) if phi is None else phi
    return [local_order(sys.chart, g, D, phi) for g in sys.generators]


@dataclass(frozen=True)
class GenericOrder:
    order: int
    coefficients: tuple[Fraction, ...]
    trials: int
    seed: int


def _random_rational(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-50, 50), rng.randint(1, 10))


def generic_member_order(sys: LinearSystemSpec, trials: int = 3, seed: int = 0,
                         phi: Poly | None = None) -> GenericOrder:
    if trials < 1:
        raise ValueError("trials must be >= 1")
    D = sys.degree
    phi = implicit_solution(sys.chart, D) if phi is None else phi
    rng = random.Random(seed)
    best = None
    for _ in range(trials):
        cs = [_random_rational(rng) for _ in sys.generators]
        while not any(cs):
            cs = [_random_rational(rng) for _ in sys.generators]
        member = Poly(sys.chart.n)
        for c, g in zip(cs, sys.generators):
            member = member + g * c
        if member.is_zero():
            continue
        k = require_order(local_order(sys.chart, member, D, phi))
        if best is None or k < best[0]:
            best = (k, tuple(cs))
    if best is None:
        raise ValueError("every sampled member vanished identically")
    return GenericOrder(best[0], best[1], trials, seed)


def family_averaged_multiplicity(sys: LinearSystemSpec, orders=None) -> Fraction:
    orders = member_orders(sys) if orders is None else orders
    orders = [require_order(k) for k in orders]
    return Fraction(sum(orders), len(orders))


CONVENTION_NOTE = (
    "generic-member: order of a generic member of the pencil; family-average: mean of "
    "the generator orders (the averaged-measure convention that reproduces mult_o M = 3 "
    "for <q1^2, q2> on a cubic).  Both are lower-bound certificates."
)


@dataclass(frozen=True)
class MobilityCertificate:
    system: LinearSystemSpec
    convention: str
    mobile: Verdict
    orders: tuple[int, ...]
    generic: GenericOrder
    family_average: Fraction
    ratio: Fraction
    notes: tuple[str, ...] = field(default=())

    @property
    def multiplicity(self) -> Fraction:
        return self.ratio * self.system.N

    def to_json(self) -> dict:
        return {
            "name": self.system.name,
            "convention": self.convention,
            "N": self.system.N,
            "generators": [g.to_json() for g in self.system.generators],
            "truncation": self.system.degree,
            "mobile": self.mobile.ok,
            "gcd": self.mobile.witness.to_str() if isinstance(self.mobile.witness, Poly) else None,
            "member_orders": list(self.orders),
            "generic_member_order": self.generic.order,
            "generic_member_coefficients": [format_scalar(c) for c in self.generic.coefficients],
            "family_average_multiplicity": format_scalar(self.family_average),
            "multiplicity": format_scalar(self.multiplicity),
            "ratio": format_scalar(self.ratio),
            "notes": list(self.notes),
        }


def certificate(sys: LinearSystemSpec, convention: str, trials: int = 3, seed: int = 0) -> MobilityCertificate:
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}; expected one of {CONVENTIONS}")
    verdict = is_mobile_pencil(sys)
    if not verdict.ok:
        w = verdict.witness.to_str() if isinstance(verdict.witness, Poly) else str(verdict.witness)
        raise NotMobile(f"{verdict.message}: {w}")
    phi = implicit_solution(sys.chart, sys.degree)
    orders = tuple(require_order(k) for k in member_orders(sys, phi))
    generic = generic_member_order(sys, trials, seed, phi)
    avg = family_averaged_multiplicity(sys, orders)
    chosen = Fraction(generic.order) if convention == "generic-member" else avg
    notes = [CONVENTION_NOTE]
    if avg != generic.order:
        notes.append(
            f"convention discrepancy: generic-member order {generic.order} vs family-average {format_scalar(avg)}"
        )
    return MobilityCertificate(sys, convention, verdict, orders, generic, avg, chosen / sys.N, tuple(notes))


# ---------------------------------------------------------------------------
# Cone vertex check
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConeWitness:
    vertex: tuple
    samples: tuple  # (point p, t values, residuals per t (tuple per equation))
    verified: bool

    def to_json(self) -> dict:
        return {
            "vertex": [format_scalar(x) for x in self.vertex],
            "verified": self.verified,
            "samples": [
                {
                    "point": [format_scalar(x) for x in p],
                    "t": [format_scalar(t) for t in ts],
                    "residuals": [[format_scalar(r) for r in rs] for rs in res],
                }
                for p, ts, res in self.samples
            ],
        }


T_VALUES = (Fraction(-2), Fraction(-1, 2), Fraction(1, 3), Fraction(2), Fraction(5))


def _line_restriction(eq: Poly, a, b) -> Poly:
    """eq(a + s b) as a univariate polynomial in s."""
    s = Poly.var(1, 0)
    subs = [Poly.const(1, ai) + s * bi for ai, bi in zip(a, b)]
    return eq.compose(subs)


def sample_rational_points(equations: Sequence[Poly], count: int, seed: int,
                           budget: int | None = None, exclude=None) -> list[tuple]:
    """Rational points on {equations = 0} found on random small-integer lines."""
    n = equations[0].nvars
    rng = random.Random(seed)
    budget = budget if budget is not None else 400 * count
    found: list[tuple] = []
    for _ in range(budget):
        if len(found) >= count:
            break
        a = [Fraction(rng.choice((0, 0, rng.randint(-3, 3)))) for _ in range(n)]
        b = [Fraction(rng.choice((0, 0, rng.randint(-3, 3)))) for _ in range(n)]
        if not any(b):
            continue
        candidates = None
        for eq in equations:
            r = rational_roots(_line_restriction(eq, a, b))
            if r is None:
                continue
            candidates = set(r) if candidates is None else candidates & set(r)
        if candidates is None:
            candidates = {Fraction(rng.randint(-5, 5), rng.randint(1, 4))}
        for s in sorted(candidates):
            p = tuple(ai + s * bi for ai, bi in zip(a, b))
            if not any(p) or (exclude is not None and _proportional(p, exclude)):
                continue
            if all(eq(p) == 0 for eq in equations) and p not in found:
                found.append(p)
                break
    if len(found) < count:
        raise SamplingExhausted(f"found {len(found)} of {count} rational points within budget {budget}")
    return found


def _proportional(p, q) -> bool:
    from . import linalg as la

    return la.rank([p, q]) < 2


def cone_vertex_check(equations: Sequence[Poly], o, samples: int = 20, seed: int = 0,
                      budget: int | None = None) -> ConeWitness:
    """Check that every sampled point p of the variety spans a line o + t(p - o) inside it."""
    o = tuple(Fraction(x) for x in o)
    for eq in equations:
        if eq(o) != 0:
            raise ValueError("claimed vertex is not on the variety")
    pts = sample_rational_points(equations, samples, seed, budget, exclude=o)
    rows = []
    ok = True
    for p in pts:
        res = []
        for t in T_VALUES:
            q = tuple(oi + t * (pi - oi) for oi, pi in zip(o, p))
            r = tuple(eq(q) for eq in equations)
            ok = ok and all(x == 0 for x in r)
            res.append(r)
        rows.append((p, T_VALUES, tuple(res)))
    return ConeWitness(o, tuple(rows), ok)


# ---------------------------------------------------------------------------
# Segre quartic
# ---------------------------------------------------------------------------


def segre_quartic() -> Poly:
    """x0^4 + x0 x4^3 + x1^4 - 6 x1^2 x2^2 + x2^4 + x3^4 + x3^3 x4 in Q[x0..x4]."""
    return Poly(5, {
        (4, 0, 0, 0, 0): 1, (1, 0, 0, 0, 3): 1, (0, 4, 0, 0, 0): 1, (0, 2, 2, 0, 0): -6,
        (0, 0, 4, 0, 0): 1, (0, 0, 0, 4, 0): 1, (0, 0, 0, 3, 1): 1,
    })


def segre_cone() -> Poly:
    """x0^4 + x0 x4^3 + x3^4 + x3^3 x4 (the section by x1 = alpha x2)."""
    return Poly(5, {(4, 0, 0, 0, 0): 1, (1, 0, 0, 0, 3): 1, (0, 0, 0, 4, 0): 1, (0, 0, 0, 3, 1): 1})


@dataclass(frozen=True)
class SegreReport:
    alpha: object
    alpha_squared: object
    alpha_identity: object
    residual: Poly
    independent_of_x2: bool
    matches_cone: bool

    @property
    def ok(self) -> bool:
        return self.alpha_identity == 0 and self.independent_of_x2 and self.matches_cone

    def to_json(self) -> dict:
        names = ["x0", "x1", "x2", "x3", "x4"]
        return {
            "alpha": format_scalar(self.alpha),
            "alpha_squared": format_scalar(self.alpha_squared),
            "alpha_identity": format_scalar(self.alpha_identity),
            "residual": self.residual.to_str(names),
            "independent_of_x2": self.independent_of_x2,
            "matches_cone": self.matches_cone,
            "ok": self.ok,
        }


def segre_section() -> SegreReport:
    alpha = qnum(1, 1, 2)  # sqrt(3 + 2 sqrt 2) = 1 + sqrt 2
    a2 = alpha * alpha
    identity = alpha**4 - 6 * a2 + 1
    x = Poly.gens(5)
    subs = [x[0], x[2] * alpha, x[2], x[3], x[4]]
    residual = segre_quartic().compose(subs)
    return SegreReport(alpha, a2, identity, residual, not residual.uses_var(2), residual == segre_cone())


# ---------------------------------------------------------------------------
# Noether-Fano comparison
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NoetherFanoReport:
    m_Y: Fraction
    m_X: Fraction
    delta: int
    holds: bool
    convention: str | None
    caveat: str

    def to_json(self) -> dict:
        return {
            "m_Y_lower_bound": format_scalar(self.m_Y),
            "m_X_lower_bound": format_scalar(self.m_X),
            "delta": self.delta,
            "m_Y_ge_m_X": self.holds,
            "convention": self.convention,
            "caveat": self.caveat,
        }


def _bound(c):
    if isinstance(c, MobilityCertificate):
        return c.ratio, c.convention
    return Fraction(c), None


def noether_fano_check(cert_Y, cert_X, delta) -> NoetherFanoReport:
    mY, cY = _bound(cert_Y)
    mX, cX = _bound(cert_X)
    if cY is not None and cX is not None and cY != cX:
        raise ConventionMismatch(f"certificates use different conventions: {cY} vs {cX}")
    d = delta.value if hasattr(delta, "value") else int(delta)
    caveat = (
        "certificates are one-sided lower bounds; a failed comparison m_Y >= m_X is evidence "
        "that no symplectic map Y -> X exists only when m_Y is known exactly"
    )
    return NoetherFanoReport(mY, mX, d, mY >= mX, cY or cX, caveat)


def segre_cone_check(samples: int = 20, seed: int = 0) -> ConeWitness:
    """cone_vertex_check for X ∩ Π in the coordinates (x0, x2, x3, x4) of Π ≅ P^3.

    The residual of :func:`segre_section` involves neither x1 nor x2, so the
    x2-point (0:1:0:0) of Π is the claimed vertex.
    """
    residual = segre_section().residual
    cone = Poly(4, {(e[0], e[2], e[3], e[4]): c for e, c in residual.terms.items()})
    return cone_vertex_check([cone], (0, 1, 0, 0), samples, seed)
