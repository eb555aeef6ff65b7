"""Closed billiard trajectories from billiard sequences.

A sequence ``(a0, ..., a_{n-1})`` is unfolded into the reflection word
``G = r(a0)∘r(a1)∘...∘r(a_{n-1})``. The unfolded walls are
``W_i = r(a0)∘...∘r(a_{i-1})(side a_i)``; the closed trajectory is the axis of
``G`` (of ``G∘G`` for odd n) cut by those walls and folded back into the table.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from .conf import tolerances
from .exceptions import (
    FamilyInvalidError,
    InvalidSequenceError,
    NonHyperbolicWordError,
    SequenceError,
)
from .hypgeo import (
    HPoint,
    Isometry,
    angle_between,
    axis_frame,
    compose,
    direction_at,
    dist,
    glide_length,
    klein_point,
    reflection_across,
    translation_length,
)
from .polygon import GlueLayout, LambertQuad, Table, glue_lambert

logger = logging.getLogger(__name__)

LAMBERT_MIRROR = {1: 2, 2: 1, 3: 4, 4: 3}


@dataclass(frozen=True)
class BilliardSequence:
    entries: Tuple[int, ...]

    def __post_init__(self):
        entries = tuple(int(a) for a in self.entries)
        if len(entries) < 2:
            raise SequenceError("A billiard sequence needs at least two entries")
        for i, a in enumerate(entries):
            if a < 1:
                raise SequenceError(f"Side label {a} must be positive")
            if a == entries[(i + 1) % len(entries)]:
                raise SequenceError(f"Consecutive entries {i} and {(i + 1) % len(entries)} repeat side {a}")
        object.__setattr__(self, 'entries', entries)

    @classmethod
    def parse(cls, text: str) -> 'BilliardSequence':
        try:
            return cls(tuple(int(part) for part in text.split(',') if part.strip()))
        except ValueError as e:
            if isinstance(e, SequenceError):
                raise
            raise SequenceError(f"Cannot read billiard sequence {text!r}") from e

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, index):
        return self.entries[index]

    def __str__(self) -> str:
        return ','.join(str(a) for a in self.entries)

    def check_labels(self, m: int) -> None:
        bad = [a for a in self.entries if a > m]
        if bad:
            raise SequenceError(f"Side labels {bad} outside 1..{m}")

    def shifted(self, start: int) -> 'BilliardSequence':
        start %= len(self)
        return BilliardSequence(self.entries[start:] + self.entries[:start])

    def reversed(self) -> 'BilliardSequence':
        return BilliardSequence(tuple(reversed(self.entries)))

    def doubled(self) -> 'BilliardSequence':
        return BilliardSequence(self.entries + self.entries)

    def canonical(self) -> Tuple[int, ...]:
        """Smallest representative under cyclic shifts and reversal."""
        words = []
        for word in (self, self.reversed()):
            words.extend(word.shifted(i).entries for i in range(len(word)))
        return min(words)


def rotate_sequence(a: BilliardSequence, j: int, m: int) -> BilliardSequence:
    return BilliardSequence(tuple((x - 1 + j) % m + 1 for x in a))


def reflect_sequence(a: BilliardSequence) -> BilliardSequence:
    """Relabel a Lambert-table sequence by the mirror involution (1 2)(3 4)."""
    try:
        return BilliardSequence(tuple(LAMBERT_MIRROR[x] for x in a))
    except KeyError as e:
        raise SequenceError(f"Lambert side label {e.args[0]} outside 1..4") from e


@dataclass(frozen=True, eq=False)
class BilliardTrajectory:
    sequence: BilliardSequence
    bounce_points: Tuple[HPoint, ...]
    segment_lengths: Tuple[float, ...]
    total_length: float
    word: Isometry
    reflection_angles: Tuple[Tuple[float, float], ...] = field(default=())
    corner_passages: Tuple[int, ...] = field(default=())

    @property
    def parity(self) -> str:
        return 'even' if len(self.sequence) % 2 == 0 else 'odd'

    def segments(self) -> List[Tuple[HPoint, HPoint]]:
        points = self.bounce_points
        return [(points[i], points[(i + 1) % len(points)]) for i in range(len(points))]


def _prefix_words(table: Table, a: BilliardSequence) -> List[Isometry]:
    prefixes = [Isometry.identity()]
    for label in a:
        prefixes.append(compose(prefixes[-1], reflection_across(table.side(label).geodesic)))
    return prefixes


def unfold(table: Table, a: BilliardSequence) -> Isometry:
    """The reflection word ``r(a_{n-1})∘...∘r(a0)``."""
    a.check_labels(table.n)
    return _prefix_words(table, a)[-1].inverse()


def trajectory(table: Table, a: BilliardSequence) -> BilliardTrajectory:
    a.check_labels(table.n)
    tol = tolerances()
    n = len(a)
    prefixes = _prefix_words(table, a)
    word = prefixes[-1]
    translation = word if n % 2 == 0 else compose(word, word)
    if abs(translation.trace) <= 2.0 + tol.trace_tol:
        raise NonHyperbolicWordError(
            f"Word of {a} is not hyperbolic (|trace| = {abs(translation.trace):.12g})",
            sequence=list(a),
        )
    frame, _ = axis_frame(translation)
    to_axis = frame.inverse()
    period = translation_length(word) if n % 2 == 0 else glide_length(word)

    heights = []
    for i, label in enumerate(a):
        h = compose(to_axis, prefixes[i])
        (u1, v1), (u2, v2) = (h.apply_boundary(vec) for vec in table.side(label).geodesic.boundary_vectors())
        if not u1 * v1 * u2 * v2 < 0:
            raise InvalidSequenceError(f"Wall {i} (side {label}) misses the trajectory axis", sequence=list(a))
        heights.append(0.5 * math.log(-(u1 * u2) / (v1 * v2)))
    heights.append(heights[0] + period)

    segment_lengths = [heights[i + 1] - heights[i] for i in range(n)]
    corners = _corner_passages(table, a, segment_lengths, tol.geometric_tol)

    bounces = []
    for i, label in enumerate(a):
        back = compose(prefixes[i].inverse(), frame)
        point = HPoint.from_upper(back.apply_upper(1j * math.exp(heights[i])))
        vertex = corners.get(i, corners.get((i - 1) % n))
        if vertex is not None:
            if dist(point, table.vertices[vertex]) > 1e3 * tol.geometric_tol:
                raise InvalidSequenceError(f"Bounce {i} misses corner {vertex}", sequence=list(a))
            point = table.vertices[vertex]
        elif not table.side(label).contains_point(point, tol.geometric_tol):
            raise InvalidSequenceError(f"Bounce {i} misses the open side {label}", sequence=list(a))
        bounces.append(point)

    _check_segments_inside(table, bounces, tol.segment_samples, a)
    angles = reflection_angles(table, a, bounces, tuple(corners))
    worst = max(abs(incoming - outgoing) for incoming, outgoing in angles)
    if worst > tol.angle_tol:
        raise InvalidSequenceError(f"Reflection law fails for {a}", worst_angle_error=worst)

    logger.debug("Trajectory %s has length %.12g", a, period)
    return BilliardTrajectory(
        sequence=a,
        bounce_points=tuple(bounces),
        segment_lengths=tuple(segment_lengths),
        total_length=period,
        word=word.inverse(),
        reflection_angles=tuple(angles),
        corner_passages=tuple(sorted(corners)),
    )


def _corner_passages(table: Table, a: BilliardSequence, segment_lengths: List[float], tol: float) -> Dict[int, int]:
    """Segments of zero length, mapped to the table corner they sit on.

    Only corners the table marks passable qualify; the two bounces there
    coincide at the vertex. Lengths of such segments are set to zero in place.
    """
    n = len(a)
    corners: Dict[int, int] = {}
    for i, length in enumerate(segment_lengths):
        if length > tol:
            continue
        vertex = table.shared_vertex(a[i], a[(i + 1) % n]) if abs(length) <= tol else None
        if vertex is None or vertex not in table.passable_vertices():
            raise InvalidSequenceError(f"Bounces of {a} are out of order along the axis", sequence=list(a))
        if (i - 1) % n in corners or (i + 1) % n in corners:
            raise InvalidSequenceError(f"{a} runs through two corners in a row", sequence=list(a))
        corners[i] = vertex
        segment_lengths[i] = 0.0
    return corners


def _check_segments_inside(table: Table, bounces: Sequence[HPoint], samples: int, a: BilliardSequence) -> None:
    klein = np.array([klein_point(p) for p in bounces])
    ends = np.roll(klein, -1, axis=0)
    t = np.linspace(0.0, 1.0, samples)[None, :, None]
    points = (klein[:, None, :] * (1 - t) + ends[:, None, :] * t).reshape(-1, 2)
    if not np.all(table.contains(points, tol=1e-10)):
        raise InvalidSequenceError(f"A segment of {a} leaves the table", sequence=list(a))


def reflection_angles(table: Table, a: BilliardSequence, bounces: Sequence[HPoint],
                      corners: Sequence[int] = ()) -> List[Tuple[float, float]]:
    """(incidence, reflection) angle pairs measured against the side at each bounce.

    ``corners[j] = i`` marks bounces i and i+1 as one passage through a right
    angled corner; the path leaves along the line it came in on, so both
    angles there are taken against the same side direction.
    """
    n = len(bounces)
    angles = []
    for i, label in enumerate(a):
        here = bounces[i]
        first = i if i in corners else (i - 1) % n if (i - 1) % n in corners else None
        if first is None:
            along = direction_at(here, table.side(label).end)
            incoming = direction_at(here, bounces[i - 1])
            outgoing = direction_at(here, bounces[(i + 1) % n])
            angles.append((angle_between(incoming, along), angle_between(outgoing, along + math.pi)))
            continue
        far_end = max(table.side(a[first]).endpoints, key=lambda p: dist(here, p))
        along = direction_at(here, far_end)
        incoming = direction_at(here, bounces[(first - 1) % n])
        outgoing = direction_at(here, bounces[(first + 2) % n])
        angles.append((angle_between(incoming, along), angle_between(outgoing, along)))
    return angles


@dataclass(frozen=True, eq=False)
class CyclicFamily:
    base: BilliardSequence
    members: Tuple[BilliardTrajectory, ...]

    @property
    def lengths(self) -> Tuple[float, ...]:
        return tuple(m.total_length for m in self.members)

    @property
    def average_length(self) -> float:
        return float(np.mean(self.lengths))

    @property
    def distinct_count(self) -> int:
        """Distinct trajectories among the members, up to shift and reversal."""
        return len({m.sequence.canonical() for m in self.members})


def cyclic_family(table: Table, a: BilliardSequence) -> CyclicFamily:
    """All label rotations of ``a``, kept with multiplicity."""
    m = table.n
    a.check_labels(m)
    members = []
    for j in range(m):
        rotated = rotate_sequence(a, j, m)
        try:
            members.append(trajectory(table, rotated))
        except InvalidSequenceError as e:
            raise FamilyInvalidError(
                f"Rotation {rotated} of {a} is invalid on this table: {e.message}",
                rotation=j, sequence=list(rotated),
            ) from e
    return CyclicFamily(a, tuple(members))


class ReflectivePair(NamedTuple):
    trajectory: BilliardTrajectory
    reflected: BilliardTrajectory
    average: float


def reflective_pair(quad: LambertQuad, a: BilliardSequence) -> ReflectivePair:
    first = trajectory(quad, a)
    second = trajectory(quad, reflect_sequence(a))
    return ReflectivePair(first, second, (first.total_length + second.total_length) / 2)


@dataclass(frozen=True)
class GluedLift:
    sequence: BilliardSequence
    passes: int
    family_size: int
    copies: Tuple[int, ...]


def lift_sequence_to_polygon(quad: LambertQuad, a: BilliardSequence, layout: Optional[GlueLayout] = None) -> GluedLift:
    """Follow ``a`` through the copies of the glued polygon until it closes.

    Spoke bounces move to the neighbouring copy; outer bounces emit the
    glued polygon's label for that side of the current copy.
    """
    a.check_labels(4)
    if layout is None:
        _, layout = glue_lambert(quad)
    trajectory(quad, a)

    copy, phase, steps = 0, 0, 0
    emitted: List[int] = []
    copies: List[int] = []
    while True:
        label = a[phase]
        if layout.is_spoke(label):
            copy = layout.neighbour(copy, label)
        else:
            emitted.append(layout.outer_label(copy, label))
            copies.append(copy)
        phase = (phase + 1) % len(a)
        steps += 1
        if phase == 0 and copy == 0:
            break
    passes = steps // len(a)
    if len(emitted) < 2:
        raise InvalidSequenceError(f"{a} never reaches the outer boundary", sequence=list(a))
    return GluedLift(
        sequence=BilliardSequence(tuple(emitted)),
        passes=passes,
        family_size=4 * quad.k // passes,
        copies=tuple(copies),
    )


class ScalingCheck(NamedTuple):
    k: int
    lift: GluedLift
    glued_average: float
    pair_average: float

    @property
    def lhs(self) -> float:
        return self.lift.family_size * self.glued_average

    @property
    def rhs(self) -> float:
        return 4 * self.k * self.pair_average


def scaling_relation(quad: LambertQuad, a: BilliardSequence) -> ScalingCheck:
    """Both sides of ``n·L_avg(b, P_Q) = 4k·L_avg(a, Q)`` for the glued polygon P_Q."""
    glued, layout = glue_lambert(quad)
    lift = lift_sequence_to_polygon(quad, a, layout)
    family = cyclic_family(glued, lift.sequence)
    pair = reflective_pair(quad, a)
    return ScalingCheck(quad.k, lift, family.average_length, pair.average)
