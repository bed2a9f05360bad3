from fractions import Fraction

import pytest

from smoothlocus.cli import parse_polynomial, parse_presentation
from smoothlocus.poly import QQ, Ambient, Polynomial
from smoothlocus.smoothness import Presentation


def build_poly(text: str, pres: Presentation) -> Polynomial:
    names = {n: i for i, n in enumerate(pres.var_names)}
    return parse_polynomial(text, pres.ambient, names)


def build_presentation(text: str) -> Presentation:
    return parse_presentation(text)


@pytest.fixture
def circle() -> Presentation:
    return build_presentation("field QQ\nvars x y\nrel x^2 + y^2 - 1\n")


@pytest.fixture
def cusp() -> Presentation:
    return build_presentation("field QQ\nvars x y\nrel y^2 - x^3\n")


@pytest.fixture
def node() -> Presentation:
    return build_presentation("field QQ\nvars x y\nrel x*y\n")


@pytest.fixture
def poly_ring() -> Presentation:
    return build_presentation("field QQ\nvars x y\n")


def random_polynomial(rng, ambient: Ambient, max_deg=3, max_terms=4, coeff_bound=5) -> Polynomial:
    """Small random polynomial with exact coefficients; may be zero."""
    n = ambient.nvars
    pairs = []
    for _ in range(rng.randint(1, max_terms)):
        mono = [0] * n
        for _ in range(rng.randint(0, max_deg)):
            if n == 0:
                break
            mono[rng.randrange(n)] += 1
        if sum(mono) > max_deg:
            continue
        c = rng.randint(-coeff_bound, coeff_bound)
        if ambient.field.characteristic == 0 and rng.random() < 0.3:
            c = Fraction(c, rng.randint(1, 4))
        pairs.append((tuple(mono), c))
    return Polynomial.from_terms(ambient, pairs)


def random_point(rng, n, bound=3):
    return [Fraction(rng.randint(-bound, bound), rng.randint(1, 3)) for _ in range(n)]
