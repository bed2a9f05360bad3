import random
from fractions import Fraction

import pytest

from conftest import build_poly, build_presentation, random_polynomial
from smoothlocus.groebner import IdealBasis, buchberger, normal_form
from smoothlocus.kaehler import (
    ConormalReport,
    conormal_check,
    omega_fiber_dim,
    omega_presentation,
    universal_d,
)
from smoothlocus.poly import GF, QQ, Ambient, Polynomial
from smoothlocus.smoothness import (
    NotSmoothAtPoint,
    PointNotOnVariety,
    Presentation,
    standard_smooth_charts,
)


def independent_rank(matrix, field):
    """Gaussian elimination written from scratch for cross-checking."""
    rows = [list(r) for r in matrix]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        pivot = None
        for i in range(rank, len(rows)):
            if rows[i][col]:
                pivot = i
                break
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        pr = rows[rank]
        inv = field.inv(pr[col])
        for i in range(len(rows)):
            if i == rank or not rows[i][col]:
                continue
            scale = field.mul(rows[i][col], inv)
            rows[i] = [field.sub(a, field.mul(scale, b)) for a, b in zip(rows[i], pr)]
        rank += 1
    return rank


class TestPresentation:
    def test_circle(self, circle):
        omega = omega_presentation(circle)
        assert omega.rank == 2
        assert omega.relation_rows == ((build_poly("2x", circle), build_poly("2y", circle)),)

    def test_free_module_without_relators(self, poly_ring):
        omega = omega_presentation(poly_ring)
        assert omega.rank == 2
        assert omega.relation_rows == ()

    def test_cusp(self, cusp):
        omega = omega_presentation(cusp)
        assert omega.relation_rows == ((build_poly("-3x^2", cusp), build_poly("2y", cusp)),)


class TestUniversalD:
    def test_formula(self, circle):
        f = build_poly("x^2 y", circle)
        assert universal_d(circle, f) == (build_poly("2x y", circle), build_poly("x^2", circle))

    def test_constant(self, circle):
        d = universal_d(circle, Polynomial.constant(circle.ambient, 5))
        assert all(entry.is_zero for entry in d)

    def test_relator_annihilation(self, circle, cusp):
        for pres in (circle, cusp):
            omega = omega_presentation(pres)
            for i, f in enumerate(pres.relators):
                assert universal_d(pres, f) == omega.relation_rows[i]

    def test_combination_congruence(self, circle, cusp):
        # d(sum g_i f_i) = sum g_i df_i modulo I1 * S^n
        rng = random.Random(314)
        for pres in (circle, cusp):
            gb1 = buchberger(pres.relator_ideal())
            for _ in range(25):
                gs = [random_polynomial(rng, pres.ambient) for _ in pres.relators]
                combo = Polynomial.zero(pres.ambient)
                for g, f in zip(gs, pres.relators):
                    combo = combo + g * f
                lhs = universal_d(pres, combo)
                rhs = [Polynomial.zero(pres.ambient)] * pres.n
                for g, f in zip(gs, pres.relators):
                    df = universal_d(pres, f)
                    rhs = [r + g * entry for r, entry in zip(rhs, df)]
                for left, right in zip(lhs, rhs):
                    assert normal_form(left - right, gb1).is_zero

    def test_leibniz_componentwise(self, circle):
        rng = random.Random(2718)
        for _ in range(50):
            p = random_polynomial(rng, circle.ambient)
            q = random_polynomial(rng, circle.ambient)
            lhs = universal_d(circle, p * q)
            rhs = tuple(
                p * dq + q * dp
                for dp, dq in zip(universal_d(circle, p), universal_d(circle, q))
            )
            assert lhs == rhs


class TestFiberDim:
    def test_circle_at_pole(self, circle):
        assert omega_fiber_dim(circle, [0, 1]) == 1

    def test_cusp_at_origin(self, cusp):
        assert omega_fiber_dim(cusp, [0, 0]) == 2

    def test_affine_line(self):
        pres = build_presentation("field QQ\nvars x\n")
        assert omega_fiber_dim(pres, [5]) == 1

    def test_point_off_variety(self, circle):
        with pytest.raises(PointNotOnVariety):
            omega_fiber_dim(circle, [2, 2])

    def test_cross_check_against_independent_elimination(self, circle, cusp, node):
        from smoothlocus.smoothness import jacobian

        cases = [
            (circle, [(Fraction(3, 5), Fraction(4, 5)), (0, 1), (1, 0)]),
            (cusp, [(0, 0), (1, 1), (4, 8)]),
            (node, [(0, 0), (2, 0), (0, 3)]),
        ]
        for pres, pts in cases:
            for pt in pts:
                values = [[e.evaluate(pt) for e in row] for row in jacobian(pres)]
                expected = pres.n - independent_rank(values, pres.field)
                assert omega_fiber_dim(pres, pt) == expected


class TestConormal:
    def test_circle_point(self, circle):
        report = conormal_check(circle, [Fraction(3, 5), Fraction(4, 5)])
        assert report == ConormalReport(rank_r=1, fiber_dim=1, split_ok=True)

    def test_polynomial_ring(self, poly_ring):
        report = conormal_check(poly_ring, [1, 2])
        assert report == ConormalReport(rank_r=0, fiber_dim=2, split_ok=True)

    def test_cusp_chart_point(self, cusp):
        charts = standard_smooth_charts(cusp)
        chart = next(c for c in charts if c.localized_element.evaluate([1, 1]) != 0)
        pt = chart.extend_point([1, 1])
        report = conormal_check(chart.presentation, pt)
        assert report.rank_r == 2 and report.fiber_dim == 1 and report.split_ok

    def test_rejects_non_smooth_point(self, cusp):
        with pytest.raises(NotSmoothAtPoint):
            conormal_check(cusp, [0, 0])


class TestChartFiberConstancy:
    def circle_points(self):
        out = []
        for t in (Fraction(1, 2), Fraction(2), Fraction(1, 3), Fraction(3), Fraction(2, 5), Fraction(5, 4)):
            x = (1 - t * t) / (1 + t * t)
            y = 2 * t / (1 + t * t)
            out.append((x, y))
        return out

    def test_constant_fiber_dimension_on_charts(self, circle, cusp):
        cases = [
            (circle, self.circle_points()),
            (cusp, [(Fraction(t) ** 2, Fraction(t) ** 3) for t in (1, -1, 2, -2, 3, 5)]),
        ]
        for pres, points in cases:
            for chart in standard_smooth_charts(pres):
                cp = chart.presentation
                expected = cp.n - cp.c
                sampled = 0
                for pt in points:
                    if chart.localized_element.evaluate(pt) == 0:
                        continue
                    chart_pt = chart.extend_point(pt)
                    assert omega_fiber_dim(cp, chart_pt) == expected
                    assert conormal_check(cp, chart_pt).split_ok
                    sampled += 1
                assert sampled >= 5

    def test_localization_consistency(self, circle):
        for chart in standard_smooth_charts(circle):
            for pt in self.circle_points():
                if chart.localized_element.evaluate(pt) == 0:
                    continue
                assert omega_fiber_dim(circle, pt) == omega_fiber_dim(
                    chart.presentation, chart.extend_point(pt)
                )
