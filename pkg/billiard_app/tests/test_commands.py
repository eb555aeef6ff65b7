"""Tests for the management commands."""

import json
import math
import tempfile
from io import StringIO
from pathlib import Path

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from billiard_app.management.base import RunConfig


def run(*args):
    out = StringIO()
    call_command(*args, stdout=out, stderr=StringIO())
    return json.loads(out.getvalue())


class RunConfigTests(SimpleTestCase):

    def test_defaults_are_echoed(self):
        config = RunConfig(command='lift', sequence='1,4')
        echo = config.echo()
        self.assertEqual(echo['k'], 3)
        self.assertEqual(echo['sequence'], [1, 4])
        self.assertEqual(echo['seed'], 0)
        self.assertFalse(echo['orbit'])

    def test_rejects_bad_values(self):
        with self.assertRaises(ValueError):
            RunConfig(command='trajectory', sequence='1,1')
        with self.assertRaises(ValueError):
            RunConfig(command='table', t=-1.0)
        with self.assertRaises(ValueError):
            RunConfig(command='table', sides='1.0,-2.0,1.0')
        with self.assertRaises(ValueError):
            RunConfig(command='table', unknown=1)


class TableCommandTests(SimpleTestCase):

    def test_regular(self):
        data = run('table', 'regular', '--k', '3')
        self.assertAlmostEqual(data['side_length'], 1.3169578969, places=9)
        self.assertEqual(data['config']['mode'], 'regular')
        self.assertLess(data['holonomy_residual'], 1e-10)

    def test_lambert(self):
        data = run('table', 'lambert', '--k', '3', '--t', '0.658479')
        self.assertAlmostEqual(data['a'], data['b'], delta=1e-6)

    def test_glue_lambert_layout(self):
        data = run('table', 'glue-lambert', '--k', '3', '--t', '0.6')
        self.assertEqual(len(data['vertices']), 6)
        self.assertEqual(len(data['layout']['copies']), 6)

    def test_from_sides(self):
        data = run('table', 'from-sides', '--k', '3', '--sides', '1.3,1.35,1.28')
        self.assertAlmostEqual(data['side_lengths'][1], 1.35, places=9)

    def test_missing_sides_is_usage_error(self):
        with self.assertRaises(CommandError) as ctx:
            run('table', 'from-sides', '--k', '3')
        self.assertEqual(ctx.exception.returncode, 2)

    def test_bad_k_is_usage_error(self):
        with self.assertRaises(CommandError) as ctx:
            run('table', 'regular', '--k', '2')
        self.assertEqual(ctx.exception.returncode, 2)

    def test_output_is_deterministic(self):
        first, second = StringIO(), StringIO()
        call_command('table', 'regular', '--k', '4', stdout=first)
        call_command('table', 'regular', '--k', '4', stdout=second)
        self.assertEqual(first.getvalue(), second.getvalue())


class TrajectoryCommandTests(SimpleTestCase):

    def test_trajectory(self):
        data = run('trajectory', '--k', '3', '--sequence', '1,4')
        self.assertAlmostEqual(data['total_length'], 4 * math.acosh(math.sqrt(2)), places=9)
        self.assertEqual(data['config']['sequence'], [1, 4])

    def test_non_hyperbolic_word_is_computation_error(self):
        err = StringIO()
        with self.assertRaises(CommandError) as ctx:
            call_command('trajectory', '--k', '3', '--sequence', '1,2', stdout=StringIO(), stderr=err)
        self.assertEqual(ctx.exception.returncode, 1)
        self.assertEqual(json.loads(err.getvalue())['error']['code'], 'non_hyperbolic_word')

    def test_repeated_label_is_usage_error(self):
        with self.assertRaises(CommandError) as ctx:
            run('trajectory', '--k', '3', '--sequence', '1,1')
        self.assertEqual(ctx.exception.returncode, 2)

    def test_missing_sequence_is_usage_error(self):
        with self.assertRaises(CommandError) as ctx:
            run('trajectory', '--k', '3')
        self.assertEqual(ctx.exception.returncode, 2)

    def test_family(self):
        data = run('family', '--k', '3', '--sequence', '1,4')
        self.assertEqual(data['size'], 6)
        self.assertEqual(data['distinct'], 3)


class SurfaceCommandTests(SimpleTestCase):

    def test_lift_count(self):
        data = run('lift', '--k', '3', '--sequence', '1,4')
        self.assertEqual(data['count'], 1)
        self.assertEqual(data['geometry_check'], 'agrees')

    def test_glued_lift(self):
        data = run('lift', '--k', '3', '--t', '0.6', '--sequence', '2,3,4')
        self.assertEqual(data['sequence'], [2, 4, 6])
        self.assertEqual(data['passes'], 3)
        self.assertAlmostEqual(data['lhs'], data['rhs'], delta=1e-8)

    def test_fn_coords(self):
        data = run('fn-coords', '--k', '4')
        self.assertEqual(data['genus'], 3)
        self.assertTrue(data['in_billiard_space'])

    def test_filling_orbit(self):
        data = run('filling', '--k', '3', '--sequence', '1,4', '--orbit')
        self.assertTrue(data['is_filling'])
        self.assertFalse(run('filling', '--k', '3', '--sequence', '1,4')['is_filling'])


class OptimisationCommandTests(SimpleTestCase):

    def test_minimize(self):
        data = run('minimize', '--k', '3', '--sequence', '1,3,5', '--starts', '1')
        self.assertLess(data['distance_to_regular'], 1e-4)
        self.assertTrue(data['local_minimum'])
        self.assertEqual(data['config']['starts'], 1)

    def test_minimize_lambert(self):
        data = run('minimize-lambert', '--k', '3', '--sequence', '2,3,4')
        self.assertLess(abs(data['sinh2_defect']), 1e-6)

    def test_bad_range_is_usage_error(self):
        with self.assertRaises(CommandError) as ctx:
            run('minimize-lambert', '--k', '3', '--sequence', '2,3,4', '--t-range', '1.0,0.5')
        self.assertEqual(ctx.exception.returncode, 2)


class FileOutputTests(SimpleTestCase):

    def test_json_and_svg_files(self):
        with tempfile.TemporaryDirectory() as tmp:
            json_path = Path(tmp) / 'orbit.json'
            svg_path = Path(tmp) / 'orbit.svg'
            call_command('trajectory', '--k', '3', '--sequence', '1,3,5',
                         '--json', str(json_path), '--svg', str(svg_path), stdout=StringIO())
            data = json.loads(json_path.read_text())
            self.assertEqual(data['svg'], str(svg_path))
            svg = svg_path.read_text()
            self.assertIn('<svg', svg)
            self.assertIn(' A ', svg)

    def test_render(self):
        with tempfile.TemporaryDirectory() as tmp:
            svg_path = Path(tmp) / 'octagon.svg'
            data = run('render', '--k', '4', '--green', '--sequence', '1,5', '--orbit', '--svg', str(svg_path))
            self.assertEqual(data['green_diagonals'], 1)
            self.assertEqual(data['trajectories'], 8)
            self.assertIn('stroke-dasharray', svg_path.read_text())

    def test_render_needs_svg(self):
        with self.assertRaises(CommandError) as ctx:
            run('render', '--k', '3')
        self.assertEqual(ctx.exception.returncode, 2)
