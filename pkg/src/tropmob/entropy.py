"""Entropy constant of a family of corner-locus measures and the chain inequality.

A :class:`MeasureFamily` is a finite sample of the set S(Π, M): PL functions
ℓ on a simplex Π together with atomic measures supported on corner_locus(ℓ),
each of total mass at most M.  :func:`entropy_constant` embeds every member as
(barycentric mass center, total mass), builds the convex hull of these points
and maximizes the mass functional over the hull's facet description with the
exact simplex method; the result is cross-checked against the member maximum.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import linalg as la
from .errors import EmptyFamily, MassBoundViolated, TransportFailure
from .field import format_scalar
from .lattice import convex_hull
from .lp import maximize
from .measures import ComplexMeasure, atomic_measure, preimage_point, total_mass
from .mobility import MobilityCertificate
from .pl import DilationFactor, PLFunction, PLMap, eval_pl, pullback_pl


@dataclass(frozen=True)
class Member:
    ell: PLFunction
    measure: ComplexMeasure

    @property
    def mass(self) -> Fraction:
        return total_mass(self.measure).total

    def to_json(self) -> dict:
        return {"ell": self.ell.to_json(), "measure": self.measure.to_json()}


def _barycentric(simplex, x) -> tuple[Fraction, ...]:
    """Barycentric coordinates of x w.r.t. the affinely independent points ``simplex``."""
    v0 = simplex[0]
    A = [[simplex[j][i] - v0[i] for j in range(1, len(simplex))] for i in range(len(v0))]
    mu = la.solve_any(A, la.sub(x, v0)) if len(simplex) > 1 else ()
    if mu is None or la.matvec(A, mu) != la.sub(x, v0):
        raise ValueError("point is outside the affine span of the simplex")
    return (1 - sum(mu, Fraction(0)),) + tuple(mu)


@dataclass(frozen=True)
class MeasureFamily:
    simplex: tuple[tuple[Fraction, ...], ...]
    M: Fraction
    members: tuple[Member, ...]
    name: str = ""

    def __post_init__(self):
        if self.M <= 0:
            raise ValueError("mass bound must be positive")
        pts = [la.sub(v, self.simplex[0]) for v in self.simplex[1:]]
        if pts and la.rank(pts) != len(pts):
            raise ValueError("Π must be a simplex (affinely independent vertices)")
        for i, m in enumerate(self.members):
            if m.measure.kind != "atomic":
                raise ValueError("family members carry atomic measures")
            for p, _ in m.measure.atoms:
                if len(eval_pl(m.ell, p)[1]) < 2:
                    raise ValueError(f"member {i}: atom {[str(x) for x in p]} is off the corner locus")
                if any(c < 0 for c in _barycentric(self.simplex, p)):
                    raise ValueError(f"member {i}: atom outside the simplex Π")
            if m.mass > self.M:
                raise MassBoundViolated(f"member {i} has mass {m.mass} > M = {self.M}")

    @classmethod
    def of(cls, simplex, M, members, name: str = "") -> "MeasureFamily":
        simplex = tuple(tuple(Fraction(x) for x in v) for v in simplex)
        return cls(simplex, Fraction(M), tuple(members), name)

    def scaled(self, k) -> "MeasureFamily":
        k = Fraction(k)
        return MeasureFamily(self.simplex, self.M * k,
                             tuple(Member(m.ell, m.measure.scaled(k)) for m in self.members), self.name)

    def mass_center(self, i: int) -> tuple[Fraction, ...]:
        m = self.members[i]
        total = m.mass
        if total == 0:
            k = len(self.simplex)
            return tuple(Fraction(1, k) for _ in range(k))
        n = len(self.simplex[0])
        c = [Fraction(0)] * n
        for p, mass in m.measure.atoms:
            for j in range(n):
                c[j] += mass * p[j]
        return _barycentric(self.simplex, tuple(x / total for x in c))

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "simplex": [[format_scalar(x) for x in v] for v in self.simplex],
            "M": format_scalar(self.M),
            "members": [m.to_json() for m in self.members],
        }

    @classmethod
    def from_json(cls, obj) -> "MeasureFamily":
        from .field import parse_scalar

        members = [Member(PLFunction.from_json(m["ell"]), ComplexMeasure.from_json(m["measure"])) for m in obj["members"]]
        return cls.of([[parse_scalar(x) for x in v] for v in obj["simplex"]], parse_scalar(obj["M"]), members, obj.get("name", ""))


@dataclass(frozen=True)
class DiagonalFamily:
    N: int
    selection: tuple[int, ...]
    measure: ComplexMeasure

    @property
    def mass(self) -> Fraction:
        return total_mass(self.measure).total


def diagonal_family(fam: MeasureFamily, selection: Sequence[int]) -> DiagonalFamily:
    """(1/N) Σ π_i^*(dμ_{ℓ_i}) for the selected members, as a multiset of atoms."""
    selection = tuple(int(i) for i in selection)
    if not selection:
        raise ValueError("selection must be nonempty")
    if any(not 0 <= i < len(fam.members) for i in selection):
        raise IndexError("selection index out of range")
    N = len(selection)
    n = len(fam.simplex[0])
    atoms = [(p, mass / N) for i in selection for p, mass in fam.members[i].measure.atoms]
    avg = ComplexMeasure.atomic(n, atoms)
    out = DiagonalFamily(N, selection, avg)
    if out.mass > fam.M:
        raise MassBoundViolated(f"averaged mass {out.mass} exceeds M = {fam.M}")
    return out


@dataclass(frozen=True)
class EntropyResult:
    C: Fraction
    ent: Fraction
    witness: int
    oracle: Fraction
    hull_vertices: tuple[int, ...]

    @property
    def agrees(self) -> bool:
        return self.C == self.oracle

    def to_json(self) -> dict:
        return {
            "C": format_scalar(self.C),
            "ent": format_scalar(self.ent),
            "witness_member": self.witness,
            "oracle_member_max": format_scalar(self.oracle),
            "lp_agrees_with_oracle": self.agrees,
            "hull_vertices": list(self.hull_vertices),
        }


def embed(fam: MeasureFamily) -> list[tuple[Fraction, ...]]:
    return [fam.mass_center(i) + (fam.members[i].mass,) for i in range(len(fam.members))]


def entropy_constant(fam: MeasureFamily) -> EntropyResult:
    if not fam.members:
        raise EmptyFamily("family has no members")
    pts = embed(fam)
    D = len(pts[0])
    hull = convex_hull(pts)
    A_ub, b_ub = [], []
    for a, b, _ in hull.facets_u:  # <a, x_pivots> >= b
        row = [Fraction(0)] * D
        for i, p in enumerate(hull.pivots):
            row[p] = -Fraction(a[i])
        A_ub.append(row)
        b_ub.append(-Fraction(b))
    A_eq = [list(c) for c, _ in hull.equations]
    b_eq = [e for _, e in hull.equations]
    objective = [Fraction(0)] * (D - 1) + [Fraction(1)]
    res = maximize(objective, A_ub, b_ub, A_eq, b_eq)
    if res.status != "optimal":
        raise RuntimeError(f"hull LP returned {res.status}")
    C = res.value
    masses = [p[-1] for p in pts]
    oracle = max(masses)
    witness = min(i for i in hull.vertex_ids if masses[i] == C) if C in masses else masses.index(oracle)
    return EntropyResult(C, C / fam.M, witness, oracle, tuple(sorted(hull.vertex_ids)))


# ---------------------------------------------------------------------------
# Mobility families and the chain inequality
# ---------------------------------------------------------------------------

DEFAULT_SIMPLEX = ((-1, -1), (3, -1), (-1, 3))


def mobility_family(certs: Sequence[MobilityCertificate], anchors: Sequence, ells: Sequence[PLFunction],
                    simplex=DEFAULT_SIMPLEX) -> tuple[MeasureFamily, list[list[Member]]]:
    """Family of averaged section measures, one member per certificate, with M = max certified ratio.

    For each certificate the generator measures dμ_{o,s_i} = atomic_measure(anchor,
    chart, s_i, N) are built (the *constituents*); the family member is their
    diagonal average under the family-average convention, or the measure of the
    certified generic member under the generic-member convention.
    """
    if not certs:
        raise EmptyFamily("no certificates given")
    if not (len(certs) == len(anchors) == len(ells)):
        raise ValueError("need one anchor and one PL function per certificate")
    M = max(c.ratio for c in certs)
    members, constituents = [], []
    for cert, anchor, ell in zip(certs, anchors, ells):
        sys = cert.system
        parts = [Member(ell, atomic_measure(anchor, sys.chart, g, sys.N, ell, sys.degree)) for g in sys.generators]
        constituents.append(parts)
        n = len(anchor)
        if cert.convention == "family-average":
            k = len(parts)
            atoms = [(p, mass / k) for m in parts for p, mass in m.measure.atoms]
            members.append(Member(ell, ComplexMeasure.atomic(n, atoms)))
        else:
            members.append(Member(ell, ComplexMeasure.atomic(n, [(anchor, cert.ratio)])))
    return MeasureFamily.of(simplex, M, members, "mobility"), constituents


def transport_family(fam: MeasureFamily, phi: PLMap, simplex=None, name: str = "") -> MeasureFamily:
    """The family {(Φ*ℓ, Φ^{-1} atoms with equal masses)} on the source of Φ."""
    members = []
    for m in fam.members:
        ell = pullback_pl(phi, m.ell)
        # transport: the measure of Φ*ℓ carries the same atomic masses, moved to the preimages
        atoms = [(preimage_point(phi, p), mass) for p, mass in m.measure.atoms]
        members.append(Member(ell, ComplexMeasure.atomic(phi.source_dim, atoms)))
    return MeasureFamily.of(simplex or fam.simplex, fam.M, members, name or f"{fam.name}-transported")


@dataclass(frozen=True)
class ChainReport:
    transport: bool
    matches: tuple[int, ...]
    homogeneity: bool
    ent_X: Fraction
    ent_scaled: Fraction
    delta: int
    sup_Y: Fraction
    sup_X: Fraction

    @property
    def conclusion(self) -> bool:
        return self.sup_Y >= self.sup_X

    @property
    def ok(self) -> bool:
        return self.transport and self.homogeneity and self.conclusion

    def to_json(self) -> dict:
        return {
            "transport_mass_preserved": self.transport,
            "transport_matches": list(self.matches),
            "homogeneity": self.homogeneity,
            "ent_X": format_scalar(self.ent_X),
            "ent_delta_scaled": format_scalar(self.ent_scaled),
            "delta": self.delta,
            "sup_Y": format_scalar(self.sup_Y),
            "sup_X": format_scalar(self.sup_X),
            "sup_Y_ge_sup_X": self.conclusion,
            "ok": self.ok,
        }


def chain_inequality_check(famX: MeasureFamily, famY: MeasureFamily, phi: PLMap,
                           delta: DilationFactor) -> ChainReport:
    from .pl import dilation_factor

    if dilation_factor(phi).value != delta.value:
        raise ValueError("δ is inconsistent with Φ")
    # (i) transport: every Φ*ℓ appears in famY with the same mass
    matches = []
    for i, m in enumerate(famX.members):
        target = pullback_pl(phi, m.ell).canonical()
        j = next((j for j, t in enumerate(famY.members)
                  if t.ell.canonical() == target and t.mass == m.mass), None)
        if j is None:
            raise TransportFailure(f"member {i} of famX has no transported counterpart in famY")
        matches.append(j)
    # (ii) homogeneity: ent(δ·dμ, S) = δ·ent(dμ, S), by recomputation on the scaled family
    ex = entropy_constant(famX)
    scaled = entropy_constant(famX.scaled(delta.value))
    ent_scaled = scaled.C / famX.M
    homog = ent_scaled == delta.value * ex.ent
    # (iii) the finite-sample conclusion sup_Y >= sup_X
    ey = entropy_constant(famY)
    return ChainReport(True, tuple(matches), homog, ex.ent, ent_scaled, delta.value, ey.C, ex.C)
