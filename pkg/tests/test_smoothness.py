import itertools
import math
import random
from fractions import Fraction

import pytest

from conftest import build_poly, build_presentation
from smoothlocus.groebner import IdealBasis, buchberger, ideal_membership, normal_form
from smoothlocus.poly import GF, QQ, Ambient, Polynomial
from smoothlocus.smoothness import (
    Choice,
    PointNotOnVariety,
    Presentation,
    choice_count,
    enumerate_choices,
    is_smooth,
    is_standard_smooth,
    jacobian,
    locus_piece,
    minor_det,
    smooth_at_point,
    smooth_locus,
    standard_smooth_charts,
)


def permuted(pres, var_perm, rel_order):
    """var_perm[old] = new position; rel_order lists old relator indices."""
    names = [None] * pres.n
    for old, new in enumerate(var_perm):
        names[new] = pres.var_names[old]
    rels = tuple(pres.relators[i].remap_variables(pres.ambient, var_perm) for i in rel_order)
    return Presentation(pres.field, tuple(names), rels)


class TestJacobian:
    def test_circle(self, circle):
        jac = jacobian(circle)
        assert jac == ((build_poly("2x", circle), build_poly("2y", circle)),)

    def test_no_relators(self, poly_ring):
        assert jacobian(poly_ring) == ()

    def test_cusp(self, cusp):
        jac = jacobian(cusp)
        assert jac == ((build_poly("-3x^2", cusp), build_poly("2y", cusp)),)


class TestEnumerateChoices:
    def test_one_relator_two_vars(self):
        choices = enumerate_choices(1, 2)
        assert choices == [
            Choice((), ()),
            Choice((0,), (0,)),
            Choice((0,), (1,)),
        ]

    def test_empty_case(self):
        assert enumerate_choices(0, 0) == [Choice((), ())]

    @pytest.mark.parametrize("c,n", [(1, 2), (2, 2), (2, 3), (3, 4), (3, 2)])
    def test_count_matches_closed_form(self, c, n):
        choices = enumerate_choices(c, n)
        # brute force: every pair of equal-size subsets
        brute = [
            (rows, cols)
            for size in range(min(c, n) + 1)
            for rows in itertools.combinations(range(c), size)
            for cols in itertools.combinations(range(n), size)
        ]
        assert len(choices) == len(brute) == choice_count(c, n) == math.comb(n + c, c)
        assert len(choices) == sum(math.comb(n, i) * math.comb(c, i) for i in range(c + 1))


class TestMinorDet:
    def test_empty_choice_is_one(self, circle):
        assert minor_det(jacobian(circle), Choice((), ()), circle.ambient) == Polynomial.one(circle.ambient)

    def test_one_by_one(self, circle):
        assert minor_det(jacobian(circle), Choice((0,), (0,)), circle.ambient) == build_poly("2x", circle)

    def test_two_by_two(self):
        pres = build_presentation("field QQ\nvars a b c d\nrel a\nrel b\n")
        a, b, c, d = (Polynomial.variable(pres.ambient, i) for i in range(4))
        matrix = ((a, b), (c, d))
        assert minor_det(matrix, Choice((0, 1), (0, 1)), pres.ambient) == a * d - b * c

    def test_bareiss_matches_cofactor_on_5x5(self):
        rng = random.Random(42)
        amb = Ambient(2, QQ)
        from conftest import random_polynomial
        from smoothlocus.smoothness import _det_bareiss, _det_cofactor

        for _ in range(3):
            m = [
                [random_polynomial(rng, amb, max_deg=1, max_terms=2, coeff_bound=2) for _ in range(5)]
                for _ in range(5)
            ]
            assert _det_bareiss(m, amb) == _det_cofactor(m, amb)

    def test_out_of_range(self, circle):
        with pytest.raises(IndexError):
            minor_det(jacobian(circle), Choice((1,), (0,)), circle.ambient)


class TestLocusPiece:
    def test_circle_principal_piece(self, circle):
        piece = locus_piece(circle, Choice((0,), (0,)))
        assert piece.delta == build_poly("2x", circle)
        assert piece.colon_gens == (Polynomial.one(circle.ambient),)
        assert not piece.is_empty

    def test_cusp_empty_choice(self, cusp):
        piece = locus_piece(cusp, Choice((), ()))
        assert piece.delta == Polynomial.one(cusp.ambient)
        assert piece.colon_gens == ()
        assert piece.is_empty

    def test_polynomial_ring_whole_space(self, poly_ring):
        piece = locus_piece(poly_ring, Choice((), ()))
        assert piece.delta == Polynomial.one(poly_ring.ambient)
        assert piece.colon_gens == (Polynomial.one(poly_ring.ambient),)
        assert not piece.is_empty


class TestSmoothLocus:
    def test_circle_over_qq(self, circle):
        report = smooth_locus(circle)
        assert report.globally_smooth
        assert not report.empty_scheme
        assert len(report.pieces) == 3

    def test_circle_over_gf2(self):
        pres = build_presentation("field GF 2\nvars x y\nrel x^2 + y^2 - 1\n")
        report = smooth_locus(pres)
        assert not report.globally_smooth
        assert report.non_smooth_ideal.generators == (build_poly("x^2 + y^2 + 1", pres),)
        assert all(piece.is_empty for piece in report.pieces)

    def test_cusp_origin_is_the_singular_locus(self, cusp):
        report = smooth_locus(cusp)
        assert not report.globally_smooth
        # V(N) = {(0,0)}: x^2 and y lie in N = (y^2 - x^3, 3x^2, 2y)
        x = build_poly("x", cusp)
        y = build_poly("y", cusp)
        assert ideal_membership(x**2, report.non_smooth_ideal)
        assert ideal_membership(y, report.non_smooth_ideal)
        assert not ideal_membership(Polynomial.one(cusp.ambient), report.non_smooth_ideal)

    def test_pieces_in_canonical_order(self, cusp):
        report = smooth_locus(cusp)
        assert [p.choice for p in report.pieces] == enumerate_choices(cusp.c, cusp.n)

    def test_jobs_do_not_change_result(self, cusp):
        assert smooth_locus(cusp, jobs=1) == smooth_locus(cusp, jobs=3)


class TestIsSmooth:
    def test_polynomial_ring(self, poly_ring):
        result = is_smooth(poly_ring)
        assert result.smooth and not result.empty_scheme

    def test_node_not_smooth(self, node):
        result = is_smooth(node)
        assert not result.smooth
        x = build_poly("x", node)
        y = build_poly("y", node)
        assert set(result.nonsmooth_basis) == {x, y}

    def test_empty_scheme_vacuously_smooth(self):
        pres = build_presentation("field QQ\nvars x\nrel 1\n")
        result = is_smooth(pres)
        assert result.smooth and result.empty_scheme

    def test_certificate_recombines_to_one(self, circle):
        result = is_smooth(circle)
        acc = Polynomial.zero(circle.ambient)
        for h, g in zip(result.unit_cofactors, result.generators):
            acc = acc + h * g
        assert acc == Polynomial.one(circle.ambient)


class TestSmoothAtPoint:
    def test_circle_rational_point(self, circle):
        res = smooth_at_point(circle, [Fraction(3, 5), Fraction(4, 5)])
        assert res.smooth
        assert res.choice == Choice((0,), (0,))
        assert res.witness == Polynomial.one(circle.ambient)

    def test_cusp_origin(self, cusp):
        res = smooth_at_point(cusp, [0, 0])
        assert not res.smooth
        assert res.choice == Choice((), ())
        assert res.witness is None

    def test_cusp_away_from_origin(self, cusp):
        res = smooth_at_point(cusp, [1, 1])
        assert res.smooth

    def test_point_off_variety(self, circle):
        with pytest.raises(PointNotOnVariety):
            smooth_at_point(circle, [1, 1])


class TestStandardSmooth:
    def test_one_variable_unit_minor(self):
        pres = build_presentation("field QQ\nvars x\nrel x^2 - 1\n")
        assert is_standard_smooth(pres)

    def test_circle_raw_presentation_is_not(self, circle):
        assert not is_standard_smooth(circle)

    def test_no_relators(self, poly_ring):
        assert is_standard_smooth(poly_ring)

    def test_more_relators_than_vars(self):
        pres = build_presentation("field QQ\nvars x\nrel x - 1\nrel x^2 - 1\n")
        assert not is_standard_smooth(pres)


class TestCharts:
    def test_circle_charts(self, circle):
        charts = standard_smooth_charts(circle)
        assert len(charts) == 2
        assert [c.localized_element for c in charts] == [build_poly("2x", circle), build_poly("2y", circle)]
        assert charts[0].presentation.var_names == ("x", "w", "y")
        assert charts[1].presentation.var_names == ("y", "w", "x")
        for chart in charts:
            assert is_standard_smooth(chart.presentation)

    def test_polynomial_ring_single_trivial_chart(self, poly_ring):
        charts = standard_smooth_charts(poly_ring)
        assert len(charts) == 1
        chart = charts[0]
        w = Polynomial.variable(chart.presentation.ambient, 0)
        assert chart.presentation.relators == (w - 1,)
        assert is_standard_smooth(chart.presentation)

    def test_cusp_charts_miss_origin(self, cusp):
        charts = standard_smooth_charts(cusp)
        assert [c.localized_element for c in charts] == [
            build_poly("-3x^2", cusp),
            build_poly("2y", cusp),
        ]
        for chart in charts:
            assert chart.localized_element.evaluate([0, 0]) == 0  # origin uncovered
            assert is_standard_smooth(chart.presentation)

    def test_chart_count_for_fp_power(self):
        pres = build_presentation("field GF 3\nvars x\nrel x^3\n")
        assert standard_smooth_charts(pres) == []  # nowhere smooth


class TestInvariants:
    def circle_points(self):
        # rational circle points from Pythagorean parametrization
        out = []
        for t in (Fraction(1, 2), Fraction(2), Fraction(1, 3), Fraction(3), Fraction(2, 5)):
            x = (1 - t * t) / (1 + t * t)
            y = 2 * t / (1 + t * t)
            out.append((x, y))
        return out

    def test_theorem1_consistency_at_points(self, circle, cusp, node):
        cases = [
            (circle, self.circle_points()),
            (cusp, [(Fraction(t) ** 2, Fraction(t) ** 3) for t in (-2, -1, 1, 2, 3)] + [(0, 0)]),
            (node, [(Fraction(t), Fraction(0)) for t in (-2, 1, 3)] + [(0, 0)]),
        ]
        for pres, points in cases:
            report = smooth_locus(pres)
            for pt in points:
                verdict = smooth_at_point(pres, pt).smooth
                piecewise = any(
                    (piece.delta * g).evaluate(pt) != 0
                    for piece in report.pieces
                    for g in piece.colon_gens
                )
                assert verdict == piecewise

    def test_chart_determinant_identity(self, circle, cusp):
        for pres in (circle, cusp):
            for chart in standard_smooth_charts(pres):
                if chart.colon_generator != Polynomial.one(pres.ambient):
                    continue
                cp = chart.presentation
                c0 = len(chart.origin.rows)
                lead = Choice(tuple(range(c0 + 1)), tuple(range(c0 + 1)))
                minor = minor_det(jacobian(cp), lead, cp.ambient)
                # embed delta into the chart ring via the variable map
                mapping = [0] * pres.n
                for new_pos, src in enumerate(chart.variable_map):
                    if src is not None:
                        mapping[src] = new_pos
                delta = chart.localized_element.remap_variables(cp.ambient, mapping)
                gb1 = buchberger(IdealBasis(cp.ambient, tuple(
                    f.remap_variables(cp.ambient, mapping) for f in pres.relators
                )))
                diff_minus = normal_form(minor - delta * delta, gb1)
                diff_plus = normal_form(minor + delta * delta, gb1)
                assert diff_minus.is_zero or diff_plus.is_zero

    def test_localization_invariance_at_points(self, circle, cusp):
        cases = [
            (circle, self.circle_points()),
            (cusp, [(Fraction(t) ** 2, Fraction(t) ** 3) for t in (1, -1, 2, -2, 3)]),
        ]
        for pres, points in cases:
            charts = standard_smooth_charts(pres)
            for pt in points:
                for chart in charts:
                    if chart.localized_element.evaluate(pt) == 0:
                        continue
                    chart_pt = chart.extend_point(pt)
                    assert smooth_at_point(chart.presentation, chart_pt).smooth == \
                        smooth_at_point(pres, pt).smooth

    def test_renumbering_covariance(self, cusp, node):
        rng = random.Random(12)
        for pres in (cusp, node):
            var_perm = list(range(pres.n))
            rng.shuffle(var_perm)
            rel_order = list(range(pres.c))
            rng.shuffle(rel_order)
            other = permuted(pres, var_perm, rel_order)
            assert smooth_locus(other).globally_smooth == smooth_locus(pres).globally_smooth
            assert len(smooth_locus(other).pieces) == len(smooth_locus(pres).pieces)
            for pt in ([1, 1], [0, 0]) if pres is cusp else ([2, 0], [0, 0]):
                moved = [None] * pres.n
                for old, new in enumerate(var_perm):
                    moved[new] = pt[old]
                try:
                    original = smooth_at_point(pres, pt).smooth
                except PointNotOnVariety:
                    continue
                assert smooth_at_point(other, moved).smooth == original

    def test_permuted_pieces_match_as_ideals(self, node):
        # swapping x and y swaps the two 1x1 pieces of the node
        other = permuted(node, [1, 0], [0])
        orig = {p.choice: p for p in smooth_locus(node).pieces}
        perm = {p.choice: p for p in smooth_locus(other).pieces}
        for choice, piece in orig.items():
            mapped_cols = tuple(sorted(1 - j for j in choice.cols))
            partner = perm[Choice(choice.rows, mapped_cols)]
            assert piece.is_empty == partner.is_empty
            moved = piece.delta.remap_variables(node.ambient, [1, 0])
            assert moved == partner.delta or moved == -partner.delta


class TestDegenerateShapes:
    def test_zero_variables_zero_relators(self):
        pres = build_presentation("field QQ\nvars\n")
        report = smooth_locus(pres)
        assert report.globally_smooth and not report.empty_scheme
        assert len(report.pieces) == 1

    def test_zero_variables_empty_scheme(self):
        pres = build_presentation("field QQ\nvars\nrel 2\n")
        report = smooth_locus(pres)
        assert report.globally_smooth and report.empty_scheme

    def test_redundant_relator_drops_from_chart(self):
        # (x^2-1, 2x^2-2): the second relator is redundant everywhere
        pres = build_presentation("field QQ\nvars x\nrel x^2 - 1\nrel 2x^2 - 2\n")
        report = smooth_locus(pres)
        assert report.globally_smooth
        charts = standard_smooth_charts(pres)
        assert charts, "smooth scheme must have at least one chart"
        for chart in charts:
            assert is_standard_smooth(chart.presentation)
            assert chart.presentation.c == len(chart.origin.rows) + 1
