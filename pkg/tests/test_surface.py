"""Surface representation: validation, invariants, the linear action, and
the genus-2 cut-and-reglue construction."""

from fractions import Fraction

import pytest

from flatsurfkit.numeric import ALPHA, CubicNumber
from flatsurfkit.surface import (
    HORIZONTAL,
    REFLECTION,
    TRANSLATION,
    VERTICAL,
    Gluing,
    Polygon,
    Surface,
    SurfaceError,
    apply_linear,
    area,
    cone_points,
    cut_and_reglue_square,
    cut_and_reglue_square as cut,
    genus,
    validate,
    vertex_cycles,
)


def shoelace(vertices):
    total = Fraction(0) if not any(isinstance(v[0], (float, CubicNumber)) for v in vertices) else 0
    n = len(vertices)
    for i in range(n):
        x0, y0 = vertices[i]
        x1, y1 = vertices[(i + 1) % n]
        total = total + (x0 * y1 - x1 * y0)
    return total * Fraction(1, 2)


class TestValidate:
    def test_torus_valid(self, torus):
        assert validate(torus) == []

    def test_ay_valid(self, ay):
        assert validate(ay) == []

    def test_edge_matched_twice(self):
        square = Polygon([(0, 0), (1, 0), (1, 1), (0, 1)])
        bad = Surface(
            [square],
            [
                Gluing((0, 0), (0, 2), TRANSLATION),
                Gluing((0, 0), (0, 2), TRANSLATION),
                Gluing((0, 1), (0, 3), TRANSLATION),
            ],
        )
        codes = {v.code for v in validate(bad)}
        assert "edge-matched-twice" in codes

    def test_vector_mismatch(self):
        square = Polygon([(0, 0), (1, 0), (1, 1), (0, 1)])
        bad = Surface(
            [square],
            [Gluing((0, 0), (0, 1), TRANSLATION), Gluing((0, 2), (0, 3), TRANSLATION)],
        )
        codes = {v.code for v in validate(bad)}
        assert "vector-mismatch" in codes

    def test_reflection_gluing_on_translation_surface(self):
        square = Polygon([(0, 0), (1, 0), (1, 1), (0, 1)])
        bad = Surface(
            [square],
            [Gluing((0, 0), (0, 0), REFLECTION), Gluing((0, 2), (0, 2), REFLECTION),
             Gluing((0, 1), (0, 3), TRANSLATION)],
            kind=TRANSLATION,
        )
        codes = {v.code for v in validate(bad)}
        assert "kind-mismatch" in codes

    def test_translation_self_gluing_rejected(self):
        square = Polygon([(0, 0), (1, 0), (1, 1), (0, 1)])
        bad = Surface(
            [square],
            [Gluing((0, 0), (0, 0), TRANSLATION), Gluing((0, 2), (0, 2), TRANSLATION),
             Gluing((0, 1), (0, 3), TRANSLATION)],
        )
        codes = {v.code for v in validate(bad)}
        assert "self-gluing" in codes


class TestVertexCycles:
    def test_torus_single_regular_point(self, torus):
        cones = vertex_cycles(torus)
        assert len(cones) == 1 and cones[0].angle_pi == 2

    def test_ay_two_6pi_points(self, ay):
        assert sorted(c.angle_pi for c in cone_points(ay)) == [6, 6]

    def test_gauss_bonnet(self, ay, torus):
        for s in (ay, torus):
            total = sum(c.angle_pi - 2 for c in vertex_cycles(s))
            assert total == 2 * (2 * genus(s) - 2)


class TestGenus:
    def test_ay_euler_data(self, ay):
        assert len(ay.polygons) == 6
        assert len(ay.gluings) == 12
        assert len(vertex_cycles(ay)) == 2
        assert genus(ay) == 3

    def test_torus(self, torus):
        assert genus(torus) == 1


class TestArea:
    def test_torus(self, torus):
        assert area(torus) == 1

    def test_ay_matches_shoelace_oracle(self, ay):
        a = ALPHA
        t0 = [
            (CubicNumber(0), CubicNumber(0)),
            (CubicNumber(1) - a, CubicNumber(1) - a),
            (CubicNumber(1) - a - a * a, CubicNumber(1)),
            (-a, a * a),
        ]
        expected = 2 * (a ** 4 + a * a) + 4 * shoelace(t0)
        assert area(ay) == expected

    def test_linear_map_preserves_area_when_unimodular(self, ay):
        m = ((ALPHA.inverse(), CubicNumber(0)), (CubicNumber(0), ALPHA))
        assert area(apply_linear(m, ay)) == area(ay)


class TestApplyLinear:
    def test_identity_is_same_data(self, ay):
        assert apply_linear(((1, 0), (0, 1)), ay) == ay

    def test_composition(self, ay):
        m1 = ((Fraction(2), Fraction(1)), (Fraction(0), Fraction(1)))
        m2 = ((Fraction(1), Fraction(0)), (Fraction(1), Fraction(1)))
        lhs = apply_linear(m2, apply_linear(m1, ay))
        m21 = ((m2[0][0] * m1[0][0] + m2[0][1] * m1[1][0], m2[0][0] * m1[0][1] + m2[0][1] * m1[1][1]),
               (m2[1][0] * m1[0][0] + m2[1][1] * m1[1][0], m2[1][0] * m1[0][1] + m2[1][1] * m1[1][1]))
        assert lhs == apply_linear(m21, ay)

    def test_area_scales_by_determinant(self, torus):
        m = ((Fraction(3), Fraction(1)), (Fraction(1), Fraction(2)))
        assert area(apply_linear(m, torus)) == 5

    def test_singular_matrix_rejected(self, torus):
        with pytest.raises(SurfaceError):
            apply_linear(((1, 1), (1, 1)), torus)

    def test_orientation_reversing_stays_valid(self, ay):
        image = apply_linear(((-1, 0), (0, 1)), ay)
        assert validate(image) == []
        assert genus(image) == 3


class TestCutAndReglue:
    def test_ay_gives_genus_two_with_four_3pi_cones(self, ay):
        for axis in (HORIZONTAL, VERTICAL):
            xi = cut(ay, 0, axis)
            assert validate(xi) == []
            assert xi.kind == "half_translation"
            assert genus(xi) == 2
            assert sorted(c.angle_pi for c in cone_points(xi)) == [3, 3, 3, 3]

    def test_torus_pillowcase(self, torus):
        # cutting the torus folds both edges: the quotient recount gives a
        # sphere with four pi cone points
        pillow = cut(torus, 0, HORIZONTAL)
        assert validate(pillow) == []
        assert genus(pillow) == 0
        assert sorted(c.angle_pi for c in vertex_cycles(pillow)) == [1, 1, 1, 1]

    def test_ay_prime_analogue(self):
        from flatsurfkit.constructions import ay_prime

        sigma = cut(ay_prime(), 0, HORIZONTAL)
        assert validate(sigma) == []
        assert genus(sigma) == 2
        assert sorted(c.angle_pi for c in cone_points(sigma)) == [3, 3, 3, 3]

    def test_not_a_parallelogram_rejected(self, ay):
        # polygon 2 of the AY surface is a trapezoid
        with pytest.raises(SurfaceError):
            cut(ay, 2, HORIZONTAL)


class TestCornerCount:
    def test_corners_equal_twice_gluings(self, ay, torus):
        for s in (ay, torus):
            corners = sum(len(p) for p in s.polygons)
            folded = sum(1 for g in s.gluings if g.is_fold)
            assert corners == 2 * len(s.gluings) - folded
