"""Shared harness for randomized lifting instances.

Builds random presentations smooth at a known rational point, takes the
standard-smooth chart containing the point, and climbs a chain of
square-zero extensions so every generated homomorphism is exact by
construction.  A chain is a list of (algebra, square-zero data) stages
whose algebras share monomial keys and where each quotient A_i/Z_i equals
the previous stage's algebra on canonical representatives, e.g.

    k = k[e]/(e^2) / (e)  ->  k[e]/(e^2) = k[e]/(e^3) / (e^2)  ->  k[e]/(e^3).

The point homomorphism seeds the bottom and each lift feeds the next
stage, with optional random corrections on the free variables.
"""

import random
from fractions import Fraction

from smoothlocus.lifting import AlgebraHom, SquareZeroData, lift_hom, make_algebra
from smoothlocus.poly import QQ, Ambient, Polynomial
from smoothlocus.smoothness import Presentation, smooth_at_point, standard_smooth_charts

from conftest import random_polynomial


def algebra_chains(field):
    """Catalog of square-zero chains; the last algebra is the lift target."""
    e2 = make_algebra(field, 1, [(2,)], names=("e",))
    e3 = make_algebra(field, 1, [(3,)], names=("e",))
    e4 = make_algebra(field, 1, [(4,)], names=("e",))
    ab2 = make_algebra(field, 2, [(2, 0), (1, 1), (0, 2)], names=("a", "b"))
    ab3 = make_algebra(field, 2, [(3, 0), (2, 1), (1, 2), (0, 3)], names=("a", "b"))
    return [
        [(e2, SquareZeroData(e2, ((1,),)))],
        [(e2, SquareZeroData(e2, ((1,),))), (e3, SquareZeroData(e3, ((2,),)))],
        [(e2, SquareZeroData(e2, ((1,),))), (e4, SquareZeroData(e4, ((2,), (3,))))],
        [(ab2, SquareZeroData(ab2, ((1, 0), (0, 1))))],
        [
            (ab2, SquareZeroData(ab2, ((1, 0), (0, 1)))),
            (ab3, SquareZeroData(ab3, ((2, 0), (1, 1), (0, 2)))),
        ],
    ]


def random_smooth_chart(rng, max_tries=40):
    """A standard-smooth chart plus a rational point on it."""
    for _ in range(max_tries):
        n = rng.choice([2, 2, 3])
        names = ("x", "y", "z")[:n]
        amb = Ambient(n, QQ)
        pt = [Fraction(rng.randint(-2, 2)) for _ in range(n)]
        relators = []
        c = rng.choice([1, 1, 2]) if n > 1 else 1
        for _ in range(c):
            f = random_polynomial(rng, amb, max_deg=2, max_terms=3, coeff_bound=3)
            f = f - Polynomial.constant(amb, f.evaluate(pt))
            relators.append(f)
        pres = Presentation(QQ, names, tuple(relators))
        if pres.c == 0:
            continue
        res = smooth_at_point(pres, pt)
        if not res.smooth or len(res.choice.rows) != pres.c:
            continue
        chart = next(
            (
                ch
                for ch in standard_smooth_charts(pres)
                if ch.origin == res.choice and ch.localized_element.evaluate(pt) != 0
            ),
            None,
        )
        if chart is None:
            continue
        return chart, chart.extend_point(pt)
    raise RuntimeError("could not build a random smooth chart")


def random_free_corrections(rng, pres, data):
    """Random elements of Z for the trailing (free) variables."""
    alg = data.algebra
    free = {}
    for j in range(pres.c, pres.n):
        if rng.random() < 0.5:
            continue
        pairs = [(m, rng.randint(-2, 2)) for m in data.z_basis if rng.random() < 0.7]
        element = alg.element(pairs)
        if element:
            free[j] = element
    return free


def climb(rng, pres, point, chain, randomize=True):
    """Lift the point homomorphism up every stage but the last; returns the
    hom into A/Z of the final stage plus that stage's data."""
    images = tuple(chain[0][0].scalar(v) for v in point)
    for algebra, data in chain[:-1]:
        hom = AlgebraHom(pres, algebra, images, quotient=data)
        free = random_free_corrections(rng, pres, data) if randomize else None
        lifted = lift_hom(pres, data, hom, free=free)
        images = lifted.images
    algebra, data = chain[-1]
    return AlgebraHom(pres, algebra, images, quotient=data), data
