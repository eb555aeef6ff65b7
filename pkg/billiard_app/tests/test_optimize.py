"""Tests for the average-length minimisation."""

import math

import numpy as np
from django.test import SimpleTestCase, tag

from billiard_app.billiard import BilliardSequence, cyclic_family
from billiard_app.exceptions import DomainError
from billiard_app.optimize import (
    ObjectiveSpec,
    avg_length_objective,
    lambert_objective,
    local_minimality,
    minimize_lambert,
    minimize_polygon,
    regular_lambert_parameter,
    unimodality_diagnostic,
)
from billiard_app.polygon import regular_polygon, regular_side_length


def seq(*entries):
    return BilliardSequence(entries)


class ObjectiveTests(SimpleTestCase):

    def test_default_box(self):
        spec = ObjectiveSpec.default(3, seq(1, 4))
        self.assertEqual(spec.dimension, 3)
        self.assertTrue(spec.in_box(spec.regular_params()))
        self.assertAlmostEqual(spec.lower[0], 0.2 * regular_side_length(3), places=12)
        self.assertAlmostEqual(spec.upper[0], 4.0 * regular_side_length(3), places=12)

    def test_regular_polygon_value(self):
        spec = ObjectiveSpec.default(3, seq(1, 3, 5))
        expected = cyclic_family(regular_polygon(3), seq(1, 3, 5)).average_length
        self.assertAlmostEqual(avg_length_objective(spec, spec.regular_params()), expected, delta=1e-10)

    def test_penalty_outside_box(self):
        spec = ObjectiveSpec.default(3, seq(1, 4), penalty=123.0)
        self.assertEqual(avg_length_objective(spec, [0.01, 1.0, 1.0]), 123.0)

    def test_box_must_contain_regular_polygon(self):
        spec = ObjectiveSpec(3, seq(1, 4), (2.0, 2.0, 2.0), (3.0, 3.0, 3.0), 1e6)
        with self.assertRaises(DomainError):
            spec.validate()


@tag('slow')
class PolygonMinimisationTests(SimpleTestCase):
    """Eight random starts besides the regular polygon; a few minutes in all."""

    def check_minimum(self, k, a):
        spec = ObjectiveSpec.default(k, a)
        result = minimize_polygon(spec, random_starts=8, seed=0)
        self.assertTrue(result.converged)
        self.assertLess(result.distance_to_regular, 1e-4)
        self.assertEqual(result.starts, 9)
        check = local_minimality(spec, result.argmin)
        self.assertTrue(check.is_local_minimum)
        self.assertEqual(len(check.increases), 2 * spec.dimension)
        return spec, result

    def test_hexagon_opposite_sides(self):
        self.check_minimum(3, seq(1, 4))

    def test_hexagon_triangle(self):
        spec, result = self.check_minimum(3, seq(1, 3, 5))
        report = unimodality_diagnostic(spec, result.argmin, lines=3, samples=9, radius=0.02, seed=1)
        self.assertEqual(report.lines, 3)
        self.assertTrue(report.all_unimodal)

    def test_octagon_square(self):
        self.check_minimum(4, seq(1, 3, 5, 7))


class LambertMinimisationTests(SimpleTestCase):

    def test_regular_parameter(self):
        self.assertAlmostEqual(regular_lambert_parameter(3), math.asinh(math.sqrt(0.5)), places=14)

    def test_objective_is_pair_average(self):
        t = regular_lambert_parameter(3)
        self.assertGreater(lambert_objective(3, seq(2, 3, 4), t), 0.0)

    def test_minimum_at_symmetric_quadrilateral(self):
        for k in (3, 4):
            result = minimize_lambert(k, seq(2, 3, 4))
            t_star = result.argmin[0]
            self.assertLess(abs(math.sinh(t_star) ** 2 - math.cos(math.pi / k)), 1e-6)
            self.assertLess(result.distance_to_regular, 1e-5)
            np.testing.assert_allclose(result.sides[0], t_star, atol=1e-9)

    def test_invalid_range(self):
        with self.assertRaises(DomainError):
            minimize_lambert(3, seq(2, 3, 4), t_range=(1.0, 0.5))
