"""Tests for the deck group, lift counts and surface coordinates."""

import itertools

from django.test import SimpleTestCase, tag

from billiard_app.billiard import BilliardSequence, cyclic_family, rotate_sequence, trajectory
from billiard_app.exceptions import BilliardsError, SequenceError
from billiard_app.hypgeo import HPoint
from billiard_app.polygon import polygon_from_sides, regular_polygon, regular_side_length
from billiard_app.surface import (
    DECK_GROUP,
    IDENTITY,
    JK,
    J,
    K,
    check_lift_geometry,
    deck_word,
    fn_coordinates,
    geometric_stabilizer,
    in_billiard_space,
    itinerary,
    lift_count,
    lifted_family_length,
    stabilizer,
)


def seq(*entries):
    return BilliardSequence(entries)


def valid_sequences(m, max_length):
    """Canonical sequences over 1..m up to ``max_length`` entries."""
    seen = set()
    for length in range(2, max_length + 1):
        for entries in itertools.product(range(1, m + 1), repeat=length):
            if any(entries[i] == entries[(i + 1) % length] for i in range(length)):
                continue
            a = BilliardSequence(entries)
            key = a.canonical()
            if key in seen:
                continue
            seen.add(key)
            yield a


class DeckGroupTests(SimpleTestCase):

    def test_klein_four_group(self):
        self.assertEqual(J * J, IDENTITY)
        self.assertEqual(K * K, IDENTITY)
        self.assertEqual(J * K, JK)
        self.assertEqual([d.name for d in DECK_GROUP], ['1', 'J', 'K', 'JK'])

    def test_copies(self):
        self.assertEqual([J.apply(c) for c in (1, 2, 3, 4)], [2, 1, 4, 3])
        self.assertEqual([K.apply(c) for c in (1, 2, 3, 4)], [3, 4, 1, 2])
        self.assertEqual([IDENTITY.apply(c) for c in (1, 2, 3, 4)], [1, 2, 3, 4])

    def test_deck_word(self):
        self.assertEqual(deck_word(seq(1, 3)), IDENTITY)
        self.assertEqual(deck_word(seq(1, 4)), JK)
        self.assertEqual(deck_word(seq(1, 3, 5)), J)
        self.assertEqual(deck_word(seq(2, 4, 6)), K)

    def test_deck_word_of_concatenation(self):
        words = list(valid_sequences(6, 3))
        for a in words:
            for b in words:
                try:
                    joined = BilliardSequence(a.entries + b.entries)
                except SequenceError:
                    continue
                self.assertEqual(deck_word(joined), deck_word(a) * deck_word(b), msg=f"{a} then {b}")


class LiftTests(SimpleTestCase):

    def test_itinerary_closes(self):
        route = itinerary(seq(1, 4))
        self.assertEqual(route.passes, 2)
        self.assertEqual(route.steps, ((1, 1), (2, 4), (4, 1), (3, 4)))
        self.assertEqual(itinerary(seq(1, 3, 2, 4)).passes, 1)

    def test_opposite_sides_lift_uniquely(self):
        traj = trajectory(regular_polygon(3), seq(1, 4))
        lift = lift_count(traj.sequence, traj.total_length)
        self.assertEqual(lift.count, 1)
        self.assertEqual(len(lift.stabilizer), 4)
        self.assertAlmostEqual(lift.per_lift_length, 4 * traj.total_length, delta=1e-12)
        self.assertIsNone(check_lift_geometry(traj))

    def test_stabilizer_always_contains_identity(self):
        for a in (seq(1, 3, 5), seq(1, 3, 2, 4)):
            self.assertIn(IDENTITY, stabilizer(itinerary(a)))

    def scan(self, k, max_length):
        table = regular_polygon(k)
        scanned = 0
        for a in valid_sequences(2 * k, max_length):
            try:
                traj = trajectory(table, a)
            except BilliardsError:
                continue
            scanned += 1
            lift = lift_count(a, traj.total_length)
            self.assertIn(lift.count, (1, 2, 4))
            self.assertAlmostEqual(lift.count * lift.per_lift_length, 4 * traj.total_length, delta=1e-9)
            self.assertIsNone(check_lift_geometry(traj), msg=str(a))
        self.assertGreater(scanned, 0)

    def test_short_scan(self):
        self.scan(3, 4)
        self.scan(4, 3)

    @tag('slow')
    def test_exhaustive_scan(self):
        for k in (3, 4):
            self.scan(k, 6)

    def test_deck_maps_compare_ordered_bounces(self):
        route = itinerary(seq(1, 2, 3, 5))
        points = [HPoint(0.1 * i, 0.05) for i in range(4)]
        self.assertEqual(stabilizer(route), (IDENTITY, JK))
        self.assertEqual(geometric_stabilizer(route, points), (IDENTITY, JK))

    def test_retracing_orbit_is_fixed_read_backwards(self):
        traj = trajectory(regular_polygon(3), seq(1, 4))
        route = itinerary(traj.sequence)
        self.assertEqual(geometric_stabilizer(route, traj.bounce_points), DECK_GROUP)

    def test_count_invariant_under_rotation(self):
        for a in valid_sequences(6, 4):
            count = lift_count(a, 1.0).count
            for j in range(1, 6):
                self.assertEqual(lift_count(rotate_sequence(a, j, 6), 1.0).count, count, msg=f"{a} by {j}")

    def test_at_most_two_lifts_when_word_is_not_trivial(self):
        for a in valid_sequences(8, 5):
            lift = lift_count(a, 1.0)
            if lift.deck_word != IDENTITY:
                self.assertEqual(lift.itinerary.passes, 2)
                self.assertLessEqual(lift.count, 2, msg=str(a))

    def test_lifted_family_recovers_average(self):
        family = cyclic_family(regular_polygon(3), seq(1, 3, 5))
        _, average = lifted_family_length(family)
        self.assertAlmostEqual(average, family.average_length, delta=1e-10)


class CoordinateTests(SimpleTestCase):

    def test_hexagon_coordinates(self):
        hexagon = regular_polygon(3)
        coords = fn_coordinates(hexagon)
        self.assertEqual(coords.genus, 2)
        self.assertEqual(coords.curve_count, 3)
        self.assertEqual(len(coords.twists), 3)
        for length in coords.alpha_lengths + coords.beta_lengths:
            self.assertAlmostEqual(length, 2 * regular_side_length(3), delta=1e-10)
        self.assertTrue(in_billiard_space(coords))

    def test_octagon_coordinates(self):
        side = regular_side_length(4)
        octagon = polygon_from_sides(4, [side * f for f in (1.04, 0.98, 1.01, 0.97, 1.02)])
        coords = fn_coordinates(octagon)
        self.assertEqual(coords.genus, 3)
        self.assertEqual(coords.curve_count, 6)
        self.assertEqual(len(coords.twists), 6)
        self.assertEqual(len(coords.delta_lengths), 1)
        self.assertEqual(coords.alpha_lengths[0], 2 * octagon.side(2).length)
        self.assertTrue(in_billiard_space(coords))
