"""Sparse multivariate polynomials with exact coefficients.

Coefficients are ``Fraction`` or :class:`~tropmob.field.QuadraticNumber`.
Exponent vectors are tuples of non-negative ints (Laurent exponents are
handled by callers that shift supports).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .field import QuadraticNumber, format_scalar, parse_scalar

Exp = tuple


class Poly:
    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Exp, object] | Iterable = ()):
        self.nvars = nvars
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean: dict = {}
        for e, c in items:
            e = tuple(int(k) for k in e)
            if len(e) != nvars:
                raise ValueError(f"exponent {e} has wrong length for {nvars} variables")
            if not isinstance(c, QuadraticNumber):
                c = Fraction(c)
            if e in clean:
                c = clean[e] + c
            clean[e] = c
        self.terms = {e: c for e, c in clean.items() if c != 0}

    @classmethod
    def _raw(cls, nvars: int, terms: dict) -> "Poly":
        """Trusted constructor: ``terms`` already has valid keys and exact values."""
        obj = cls.__new__(cls)
        obj.nvars = nvars
        obj.terms = {e: c for e, c in terms.items() if c != 0}
        return obj

    # -- constructors ---------------------------------------------------------
    @classmethod
    def const(cls, nvars: int, c) -> "Poly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, nvars: int, i: int) -> "Poly":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1})

    @classmethod
    def gens(cls, nvars: int) -> list["Poly"]:
        return [cls.var(nvars, i) for i in range(nvars)]

    # -- basic queries --------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def min_degree(self) -> int | None:
        return min((sum(e) for e in self.terms), default=None)

    def homogeneous_part(self, k: int) -> "Poly":
        return Poly._raw(self.nvars, {e: c for e, c in self.terms.items() if sum(e) == k})

    def truncate(self, deg: int) -> "Poly":
        return Poly._raw(self.nvars, {e: c for e, c in self.terms.items() if sum(e) <= deg})

    def coeff(self, e: Exp):
        return self.terms.get(tuple(e), Fraction(0))

    def constant_term(self):
        return self.coeff((0,) * self.nvars)

    def uses_var(self, i: int) -> bool:
        return any(e[i] for e in self.terms)

    def radicand(self) -> int | None:
        for c in self.terms.values():
            if isinstance(c, QuadraticNumber):
                return c.d
        return None

    # -- arithmetic -----------------------------------------------------------
    def _lift(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError("variable count mismatch")
            return other
        return Poly.const(self.nvars, other)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out[e] + c if e in out else c
        return Poly._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            if not isinstance(other, QuadraticNumber):
                other = Fraction(other)
            return Poly._raw(self.nvars, {e: c * other for e, c in self.terms.items()})
        return self.mul_trunc(other, None)

    __rmul__ = __mul__

    def mul_trunc(self, other: "Poly", deg: int | None) -> "Poly":
        """Product, dropping monomials of total degree > ``deg``."""
        other = self._lift(other)
        out: dict = {}
        right = [(e, sum(e), c) for e, c in other.terms.items()]
        for e1, c1 in self.terms.items():
            d1 = sum(e1)
            for e2, d2, c2 in right:
                if deg is not None and d1 + d2 > deg:
                    continue
                e = tuple(a + b for a, b in zip(e1, e2))
                v = c1 * c2
                out[e] = out[e] + v if e in out else v
        return Poly._raw(self.nvars, out)

    def __pow__(self, k: int):
        return self.pow_trunc(k, None)

    def pow_trunc(self, k: int, deg: int | None) -> "Poly":
        if k < 0:
            raise ValueError("negative power")
        result = Poly.const(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result.mul_trunc(base, deg)
            k >>= 1
            if k:
                base = base.mul_trunc(base, deg)
        return result

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction, QuadraticNumber)):
            return self == Poly.const(self.nvars, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    # -- evaluation / substitution -------------------------------------------
    def __call__(self, *point):
        if len(point) == 1 and isinstance(point[0], (list, tuple)):
            point = tuple(point[0])
        if len(point) != self.nvars:
            raise ValueError("point has wrong dimension")
        total = Fraction(0)
        for e, c in self.terms.items():
            v = c
            for x, k in zip(point, e):
                if k:
                    v = v * x ** k
            total = total + v
        return total

    def compose(self, subs: Sequence["Poly"], deg: int | None = None) -> "Poly":
        """Substitute polynomial ``subs[i]`` for variable ``i`` (truncating)."""
        if len(subs) != self.nvars:
            raise ValueError("need one substitution per variable")
        m = subs[0].nvars if subs else 0
        cache: dict = {}

        def power(i, k):
            key = (i, k)
            if key not in cache:
                cache[key] = subs[i].pow_trunc(k, deg)
            return cache[key]

        out = Poly(m)
        for e, c in self.terms.items():
            term = Poly.const(m, c)
            for i, k in enumerate(e):
                if k:
                    term = term.mul_trunc(power(i, k), deg)
            out = out + term
        return out

    def derivative(self, i: int) -> "Poly":
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                e2 = list(e)
                e2[i] -= 1
                out[tuple(e2)] = c * e[i]
        return Poly(self.nvars, out)

    # -- presentation ---------------------------------------------------------
    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: (-sum(t[0]), tuple(-k for k in t[0])))

    def to_str(self, names: Sequence[str] | None = None) -> str:
        if names is None:
            names = [f"x{i}" for i in range(self.nvars)]
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                names[i] if k == 1 else f"{names[i]}^{k}" for i, k in enumerate(e) if k
            )
            cs = format_scalar(c)
            if not mono:
                parts.append(cs if "sqrt" not in cs else f"({cs})")
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            elif isinstance(c, QuadraticNumber):
                parts.append(f"({cs})*{mono}")
            else:
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"Poly({self.to_str()})"

    # -- serialization --------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "nvars": self.nvars,
            "terms": [{"exp": list(e), "coeff": format_scalar(c)} for e, c in self.sorted_terms()],
        }

    @classmethod
    def from_json(cls, obj: Mapping, d: int | None = None) -> "Poly":
        terms = [(tuple(t["exp"]), parse_scalar(t["coeff"], d)) for t in obj["terms"]]
        nvars = obj.get("nvars")
        if nvars is None:
            if not terms:
                raise ValueError("empty polynomial needs explicit nvars")
            nvars = len(terms[0][0])
        return cls(nvars, terms)
