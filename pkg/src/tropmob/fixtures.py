"""Shipped fixtures: the cubic, quartic and plane pencils, tropical curves for the amoeba checks, Frobenius maps.

Every fixture is built deterministically by a function below and also shipped
as JSON under ``tropmob/data``; the test-suite checks that both agree.
Genericity of the random forms is asserted per fixture by the exact gcd test
in :func:`tropmob.mobility.is_mobile_pencil`, not proved.
"""

from __future__ import annotations

import json
import random
from importlib import resources
from itertools import combinations_with_replacement
from pathlib import Path

from .lattice import LiftedLaurentPolynomial
from .measures import LocalChart
from .mobility import LinearSystemSpec
from .pl import PLMap, frobenius
from .poly import Poly

CUBIC_SEED = 3
QUARTIC_SEED = 4
TRUNCATION = 8


def random_form(n: int, degree: int, rng: random.Random) -> Poly:
    """Homogeneous form with every monomial present, coefficients in [-9, 9] minus 0."""
    choices = [k for k in range(-9, 10) if k]
    terms = {}
    for mono in combinations_with_replacement(range(n), degree):
        e = [0] * n
        for i in mono:
            e[i] += 1
        terms[tuple(e)] = rng.choice(choices)
    return Poly(n, terms)


def hypersurface_forms(degree: int, seed: int, n: int = 4) -> list[Poly]:
    """q_1, ..., q_degree for f = q_1 + ... + q_degree in the chart x_0 != 0 of P^n."""
    rng = random.Random(seed)
    return [random_form(n, k, rng) for k in range(1, degree + 1)]


def pencil_fixture(degree: int, seed: int, name: str) -> LinearSystemSpec:
    qs = hypersurface_forms(degree, seed)
    f = Poly(qs[0].nvars)
    for q in qs:
        f = f + q
    q1, q2 = qs[0], qs[1]
    chart = LocalChart(f.nvars, f, 0, TRUNCATION)
    return LinearSystemSpec(2, (q1 * q1, q2), chart, TRUNCATION, name)


def cubic_pencil() -> LinearSystemSpec:
    """<q1^2, q2> on a cubic threefold f = q1 + q2 + q3 (n = 4)."""
    return pencil_fixture(3, CUBIC_SEED, "cubic")


def quartic_pencil() -> LinearSystemSpec:
    """<q1^2, q2> on a quartic threefold f = q1 + q2 + q3 + q4 (n = 4)."""
    return pencil_fixture(4, QUARTIC_SEED, "quartic")


def hyperplane_pencil(dim: int = 2) -> LinearSystemSpec:
    """Hyperplane sections x_1, x_2 through o on P^dim, modelled as the germ {x_dim = 0} in A^(dim+1)."""
    if dim != 2:
        raise ValueError("the pencil fixture is the hyperplane pencil of P^2")
    x = Poly.gens(dim + 1)
    chart = LocalChart(dim + 1, x[dim], dim, TRUNCATION)
    return LinearSystemSpec(1, (x[0], x[1]), chart, TRUNCATION, "projective-plane")


def tropical_line() -> LiftedLaurentPolynomial:
    return LiftedLaurentPolynomial.build(2, [((0, 0), 0), ((1, 0), 0), ((0, 1), 0)])


def square_example() -> LiftedLaurentPolynomial:
    return LiftedLaurentPolynomial.build(2, [((0, 0), 0), ((1, 0), 0), ((0, 1), 0), ((1, 1), 1)])


def conic_example() -> LiftedLaurentPolynomial:
    """1 + x1 + x2 + x1 x2 with lift 1 on x1 x2 (same lifted data as the square example)."""
    return LiftedLaurentPolynomial.build(2, [((0, 0), 0), ((1, 0), 0), ((0, 1), 0), ((1, 1), 1)])


CURVES = {"tropline": tropical_line, "square": square_example, "conic": conic_example}
PENCILS = {"cubic": cubic_pencil, "quartic": quartic_pencil, "plane": hyperplane_pencil}


def frobenius_map(d: int, dim: int) -> PLMap:
    return frobenius(d, dim)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def fixture_documents() -> dict[str, str]:
    docs = {}
    for name, build in CURVES.items():
        docs[f"{name}.json"] = _dump(build().to_json())
    for name, build in PENCILS.items():
        docs[f"{name}.json"] = _dump(build().to_json())
    for d in (2, 3):
        for dim in (2, 3):
            docs[f"frobenius_d{d}_n{dim}.json"] = _dump(frobenius_map(d, dim).to_json())
    return docs


def write_all(directory: str | Path) -> list[Path]:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    out = []
    for name, text in fixture_documents().items():
        p = directory / name
        p.write_text(text, encoding="utf-8")
        out.append(p)
    return out


def data_path(name: str) -> Path:
    return Path(str(resources.files("tropmob") / "data" / name))


def load_json(name: str) -> dict:
    return json.loads(data_path(name).read_text(encoding="utf-8"))


def load_pencil(name: str) -> LinearSystemSpec:
    return LinearSystemSpec.from_json(load_json(f"{name}.json"))


def load_curve(name: str) -> LiftedLaurentPolynomial:
    return LiftedLaurentPolynomial.from_json(load_json(f"{name}.json"))


if __name__ == "__main__":  # regenerate shipped data
    for p in write_all(Path(__file__).parent / "data"):
        print(p)
