"""Tests for right-angled polygons, Lambert quadrilaterals and the gluing."""

import math

import numpy as np
from django.test import SimpleTestCase

from billiard_app.exceptions import DomainError, NoClosingSolutionError
from billiard_app.hypgeo import HPoint, Isometry, dist
from billiard_app.polygon import (
    RIGHT_ANGLE,
    Table,
    closing_construction,
    develop,
    glue_lambert,
    green_diagonals,
    hexagon_partition,
    holonomy_residual,
    lambert_companion,
    lambert_quad,
    polygon_from_sides,
    regular_lambert,
    regular_polygon,
    regular_side_length,
    side_vector_free,
)

ARCCOSH_2 = 1.316957896924817


class RegularPolygonTests(SimpleTestCase):

    def test_regular_hexagon(self):
        hexagon = regular_polygon(3)
        self.assertEqual(hexagon.n, 6)
        for length in hexagon.side_lengths:
            self.assertAlmostEqual(length, ARCCOSH_2, delta=1e-10)
        for angle in hexagon.angles:
            self.assertAlmostEqual(angle, RIGHT_ANGLE, delta=1e-10)
        self.assertLess(hexagon.residual, 1e-10)
        self.assertAlmostEqual(hexagon.area(), math.pi, delta=1e-9)

    def test_regular_octagon_side(self):
        side = regular_side_length(4)
        self.assertAlmostEqual(math.cosh(side / 2), math.sqrt(2) * math.cos(math.pi / 8), places=12)
        octagon = regular_polygon(4)
        self.assertAlmostEqual(octagon.area(), 2 * math.pi, delta=1e-9)

    def test_regular_polygon_is_centred(self):
        octagon = regular_polygon(4)
        radii = [v.norm() for v in octagon.vertices]
        self.assertLess(max(radii) - min(radii), 1e-10)

    def test_k_must_be_at_least_three(self):
        with self.assertRaises(DomainError):
            regular_polygon(2)

    def test_colours_alternate(self):
        hexagon = regular_polygon(3)
        self.assertEqual([hexagon.color(s.label) for s in hexagon.sides], ['blue', 'red'] * 3)

    def test_development_closes_for_regular_sides(self):
        lengths = [regular_side_length(5)] * 10
        self.assertLess(holonomy_residual(lengths, [RIGHT_ANGLE] * 10), 1e-10)
        self.assertEqual(len(develop(lengths, [RIGHT_ANGLE] * 10)), 11)


class PolygonFromSidesTests(SimpleTestCase):

    def test_random_side_vectors_close(self):
        rng = np.random.default_rng(0)
        for k in (3, 4, 5):
            regular = regular_side_length(k)
            closed = 0
            for _ in range(200):
                if closed == 17:
                    break
                free = regular * (1 + rng.uniform(-0.1, 0.1, size=2 * k - 3))
                try:
                    closing_construction(free)
                except NoClosingSolutionError:
                    # no right-angled polygon has these sides
                    continue
                closed += 1
                polygon = polygon_from_sides(k, free)
                self.assertLess(polygon.residual, 1e-10)
                for angle in polygon.angles:
                    self.assertAlmostEqual(angle, RIGHT_ANGLE, delta=1e-8)
                np.testing.assert_allclose(side_vector_free(polygon), free, atol=1e-9, rtol=0)

                again = polygon_from_sides(k, side_vector_free(polygon))
                for p, q in zip(polygon.vertices, again.vertices):
                    self.assertLess(dist(p, q), 1e-9)
            self.assertEqual(closed, 17)

    def test_construction_matches_regular(self):
        for k in (3, 4, 5):
            side = regular_side_length(k)
            np.testing.assert_allclose(closing_construction([side] * (2 * k - 3)), [side] * 3, atol=1e-9)

    def test_symmetric_hexagon_closes_past_threshold(self):
        # sides 1, 2, 3 = a, b, a close exactly when sinh(a)·sinh(b/2) > 1
        hexagon = polygon_from_sides(3, [1.0, 1.7, 1.0])
        self.assertGreater(math.sinh(1.0) * math.sinh(0.85), 1.0)
        self.assertAlmostEqual(hexagon.side_lengths[3], hexagon.side_lengths[5], delta=1e-9)
        for angle in hexagon.angles:
            self.assertAlmostEqual(angle, RIGHT_ANGLE, delta=1e-8)

    def test_intersecting_end_perpendiculars_have_no_solution(self):
        self.assertLess(math.sinh(1.0) * math.sinh(0.7), 1.0)
        for free in ([1.0, 1.4, 1.0], [0.5, 0.5, 0.5]):
            with self.assertRaises(NoClosingSolutionError):
                polygon_from_sides(3, free)

    def test_wrong_number_of_sides(self):
        with self.assertRaises(DomainError):
            polygon_from_sides(3, [1.0, 1.0])

    def test_non_positive_side(self):
        with self.assertRaises(ValueError):
            polygon_from_sides(3, [1.3, -1.0, 1.3])


class TableTests(SimpleTestCase):

    def test_from_vertices_matches_construction(self):
        hexagon = regular_polygon(3)
        rebuilt = Table.from_vertices(hexagon.vertices)
        np.testing.assert_allclose(rebuilt.side_lengths, hexagon.side_lengths, atol=1e-12)
        rebuilt.validate()

    def test_contains(self):
        hexagon = regular_polygon(3)
        inside = hexagon.contains(np.array([[0.0, 0.0], [0.98, 0.0]]))
        self.assertTrue(inside[0])
        self.assertFalse(inside[1])

    def test_transformed_keeps_shape(self):
        hexagon = regular_polygon(3)
        moved = hexagon.transformed(Isometry.translation_to(HPoint(0.3, 0.2)))
        np.testing.assert_allclose(moved.side_lengths, hexagon.side_lengths, atol=1e-10)
        self.assertEqual(moved.k, 3)


class GreenDiagonalTests(SimpleTestCase):

    def test_hexagon_has_none(self):
        self.assertEqual(len(green_diagonals(regular_polygon(3))), 0)

    def test_octagon_diagonal(self):
        octagon = regular_polygon(4)
        diagonals = green_diagonals(octagon)
        self.assertEqual(len(diagonals), 1)
        arc = next(iter(diagonals))
        self.assertEqual(arc.target_label, 5)
        # sides 1 and 5 of the regular octagon are opposite
        self.assertAlmostEqual(arc.length, dist(octagon.side(1).midpoint(), octagon.side(5).midpoint()), places=8)

    def test_decagon_partition(self):
        decagon = regular_polygon(5)
        hexagons = hexagon_partition(decagon)
        self.assertEqual(len(hexagons), 3)
        self.assertAlmostEqual(sum(h.area() for h in hexagons), decagon.area(), delta=1e-8)


class LambertTests(SimpleTestCase):

    def test_symmetric_quadrilateral(self):
        quad = regular_lambert(3)
        self.assertAlmostEqual(quad.t, math.asinh(math.sqrt(0.5)), places=12)
        self.assertAlmostEqual(quad.a, quad.b, delta=1e-10)
        self.assertLess(quad.lambert_defect(), 1e-10)

    def test_angles_and_placement(self):
        quad = lambert_quad(4, 0.5)
        for angle, expected in zip(quad.angles, (RIGHT_ANGLE, RIGHT_ANGLE, RIGHT_ANGLE, math.pi / 4)):
            self.assertAlmostEqual(angle, expected, delta=1e-9)
        self.assertEqual(quad.vertices[quad.acute_vertex_index], HPoint(0.0, 0.0))
        self.assertAlmostEqual(quad.vertices[0].y, 0.0, delta=1e-12)
        self.assertAlmostEqual(quad.b, lambert_companion(4, 0.5), delta=1e-9)

    def test_parameter_must_be_positive(self):
        with self.assertRaises(DomainError):
            lambert_quad(3, 0.0)


class GluingTests(SimpleTestCase):

    def test_glued_polygon_is_right_angled(self):
        quad = lambert_quad(3, 0.55)
        polygon, layout = glue_lambert(quad)
        self.assertEqual(polygon.n, 6)
        for angle in polygon.angles:
            self.assertAlmostEqual(angle, RIGHT_ANGLE, delta=1e-8)
        lengths = polygon.side_lengths
        for label in range(1, 7):
            expected = 2 * quad.a if label % 2 == 1 else 2 * quad.b
            self.assertAlmostEqual(lengths[label - 1], expected, delta=1e-8)

    def test_symmetric_gluing_is_regular(self):
        polygon, _ = glue_lambert(regular_lambert(3))
        for length in polygon.side_lengths:
            self.assertAlmostEqual(length, ARCCOSH_2, delta=1e-8)

    def test_layout(self):
        _, layout = glue_lambert(regular_lambert(3))
        self.assertEqual(layout.describe(0, 3), ('spoke', 1))
        self.assertEqual(layout.describe(0, 4), ('spoke', 5))
        self.assertEqual(layout.describe(1, 3), ('spoke', 0))
        self.assertEqual(layout.describe(0, 1), ('outer', 1))
        self.assertEqual(layout.describe(0, 2), ('outer', 2))
        self.assertEqual(layout.describe(1, 1), ('outer', 3))
        for copy in range(6):
            for label in (3, 4):
                self.assertEqual(layout.neighbour(layout.neighbour(copy, label), label), copy)
