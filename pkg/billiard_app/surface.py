"""Combinatorial model of the billiard surface.

The surface is four copies of a right-angled polygon. Copies are numbered
1..4 and identified with bit pairs 1=(0,0), 2=(1,0), 3=(0,1), 4=(1,1); a
bounce on a blue (odd) side moves to the copy with the first bit flipped,
a bounce on a red (even) side flips the second bit. The deck group is the
Klein four-group generated by those two flips.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .billiard import BilliardSequence, BilliardTrajectory, CyclicFamily
from .conf import tolerances
from .polygon import RightAngledPolygon, green_diagonals

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DeckElement:
    flip_blue: int = 0
    flip_red: int = 0

    def __mul__(self, other: 'DeckElement') -> 'DeckElement':
        return DeckElement(self.flip_blue ^ other.flip_blue, self.flip_red ^ other.flip_red)

    @property
    def name(self) -> str:
        return {(0, 0): '1', (1, 0): 'J', (0, 1): 'K', (1, 1): 'JK'}[(self.flip_blue, self.flip_red)]

    def apply(self, copy: int) -> int:
        bits = copy - 1
        return (bits ^ self.flip_blue ^ (self.flip_red << 1)) + 1

    def __str__(self) -> str:
        return self.name


IDENTITY = DeckElement(0, 0)
J = DeckElement(1, 0)
K = DeckElement(0, 1)
JK = DeckElement(1, 1)
DECK_GROUP = (IDENTITY, J, K, JK)


def transition(label: int) -> DeckElement:
    return J if label % 2 == 1 else K


def deck_word(a: BilliardSequence) -> DeckElement:
    blue = sum(1 for x in a if x % 2 == 1)
    red = len(a) - blue
    return DeckElement(blue % 2, red % 2)


@dataclass(frozen=True)
class LiftItinerary:
    passes: int
    steps: Tuple[Tuple[int, int], ...]

    @property
    def tokens(self) -> List[Tuple[str, int]]:
        """Alternating copy and wall tokens, ``[('c', c0), ('w', a0), ('c', c1), ...]``."""
        out = []
        for copy, label in self.steps:
            out.append(('c', copy))
            out.append(('w', label))
        return out

    def mapped(self, deck: DeckElement) -> List[Tuple[str, int]]:
        return [(kind, deck.apply(value) if kind == 'c' else value) for kind, value in self.tokens]


def itinerary(a: BilliardSequence) -> LiftItinerary:
    passes = 1 if deck_word(a) == IDENTITY else 2
    copy = 1
    steps = []
    for _ in range(passes):
        for label in a:
            steps.append((copy, label))
            copy = transition(label).apply(copy)
    return LiftItinerary(passes, tuple(steps))


def _cyclic_words(tokens: Sequence) -> set:
    tokens = list(tokens)
    words = set()
    for word in (tokens, tokens[::-1]):
        for shift in range(len(word)):
            words.add(tuple(word[shift:] + word[:shift]))
    return words


def stabilizer(route: LiftItinerary) -> Tuple[DeckElement, ...]:
    """Deck elements that carry the lift onto itself as an unoriented closed curve."""
    words = _cyclic_words(route.tokens)
    return tuple(d for d in DECK_GROUP if tuple(route.mapped(d)) in words)


def geometric_stabilizer(route: LiftItinerary, bounce_points: Sequence, tol: float = 1e-8) -> Tuple[DeckElement, ...]:
    """Same verdict from the folded bounce points.

    The lift is the cyclic list of (copy travelled in, side hit, bounce point).
    A deck map fixes the lift when the mapped list is a cyclic shift of the
    list itself or of the list read backwards; backwards, each bounce is
    reached from the copy that follows it.
    """
    n = len(bounce_points)
    steps = route.steps
    m = len(steps)
    points = [np.array(bounce_points[i % n].as_tuple()) for i in range(m)]
    forward = [(copy, label, points[i]) for i, (copy, label) in enumerate(steps)]
    backward = [(steps[(i + 1) % m][0], steps[i][1], points[i]) for i in reversed(range(m))]

    def same(first, second) -> bool:
        return all(
            c == d and s == t and np.max(np.abs(p - q)) < tol
            for (c, s, p), (d, t, q) in zip(first, second)
        )

    def fixes(deck: DeckElement) -> bool:
        moved = [(deck.apply(c), s, p) for c, s, p in forward]
        return any(same(moved, word[shift:] + word[:shift]) for word in (forward, backward) for shift in range(m))

    return tuple(d for d in DECK_GROUP if fixes(d))


@dataclass(frozen=True)
class LiftCount:
    count: int
    per_lift_length: float
    deck_word: DeckElement
    itinerary: LiftItinerary
    stabilizer: Tuple[DeckElement, ...]


def lift_count(a: BilliardSequence, length: float) -> LiftCount:
    """Number of closed geodesics on the surface lying over the trajectory of ``a``."""
    route = itinerary(a)
    stab = stabilizer(route)
    count = 4 // len(stab)
    return LiftCount(count, len(stab) * length, deck_word(a), route, stab)


def check_lift_geometry(traj: BilliardTrajectory) -> Optional[str]:
    """Compare the combinatorial and geometric stabilisers; returns a message on disagreement."""
    route = itinerary(traj.sequence)
    combinatorial = stabilizer(route)
    geometric = geometric_stabilizer(route, traj.bounce_points)
    if set(combinatorial) != set(geometric):
        message = (
            f"Stabiliser mismatch for {traj.sequence}: combinatorial "
            f"{[str(d) for d in combinatorial]}, geometric {[str(d) for d in geometric]}"
        )
        logger.warning("❌ %s", message)
        return message
    return None


def lifted_family_length(family: CyclicFamily) -> Tuple[float, float]:
    """Total lifted length of a family and the average recovered from it as L_lift / 4n."""
    lifted = 0.0
    for member in family.members:
        lift = lift_count(member.sequence, member.total_length)
        lifted += lift.count * lift.per_lift_length
    return lifted, lifted / (4 * len(family.members))


@dataclass(frozen=True)
class FNCoordinates:
    k: int
    alpha_lengths: Tuple[float, ...]
    beta_lengths: Tuple[float, ...]
    delta_lengths: Tuple[Tuple[float, float], ...]
    twists: Tuple[float, ...]

    @property
    def genus(self) -> int:
        return self.k - 1

    @property
    def curve_count(self) -> int:
        return len(self.alpha_lengths) + 2 * len(self.delta_lengths)


def fn_coordinates(polygon: RightAngledPolygon) -> FNCoordinates:
    """Pants-curve lengths and twists of the surface glued from ``polygon``."""
    k = polygon.k
    alpha = tuple(2 * polygon.side(label).length for label in range(2, 2 * k + 1, 2))
    beta = tuple(2 * polygon.side(label).length for label in range(1, 2 * k, 2))
    deltas = tuple((2 * arc.length, 2 * arc.length) for arc in green_diagonals(polygon))
    return FNCoordinates(k, alpha, beta, deltas, tuple(0.0 for _ in range(3 * k - 6)))


def in_billiard_space(coords: FNCoordinates, tol: Optional[float] = None) -> bool:
    """Zero twists and equal lengths for each pair of green curves."""
    tol = tolerances().geometric_tol if tol is None else tol
    return (
        all(abs(t) <= tol for t in coords.twists)
        and all(abs(d - d_prime) <= tol for d, d_prime in coords.delta_lengths)
        and len(coords.twists) == 3 * coords.k - 6
    )
