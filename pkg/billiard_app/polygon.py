"""Billiard tables: right-angled 2k-gons, Lambert quadrilaterals and their gluing.

Polygons are built by developing their boundary. A frame starts at ``i`` in
the upper half-plane looking up the imaginary axis; each side moves it
forward by the side length and each corner turns it left by the exterior
angle. The boundary closes exactly when the final frame is ``±I``.
Vertex ``j`` is the start of side ``j + 1``; side labels run 1..m
anticlockwise.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .conf import tolerances
from .exceptions import (
    DecompositionError,
    DegeneratePolygonError,
    DomainError,
    GeometryError,
    NoClosingSolutionError,
)
from .hypgeo import (
    Geodesic,
    HPoint,
    Isometry,
    angle_at,
    common_perpendicular,
    compose,
    compose_all,
    direction_at,
    dist,
    einstein_midpoint,
    geodesic_from,
    geodesic_through,
    intersection,
    klein_point,
    reflection_across,
)

logger = logging.getLogger(__name__)

RIGHT_ANGLE = math.pi / 2


def _translation(length: float) -> np.ndarray:
    return np.diag([math.exp(length / 2), math.exp(-length / 2)])


def _turn(angle: float) -> np.ndarray:
    c, s = math.cos(angle / 2), math.sin(angle / 2)
    return np.array([[c, s], [-s, c]])


def develop(lengths: Sequence[float], angles: Sequence[float]) -> List[np.ndarray]:
    """Frames along the boundary; ``frames[j]`` sits at vertex ``j``.

    ``angles[j]`` is the interior angle at vertex ``j``. The returned list has
    one more frame than there are sides; the last one is the holonomy.
    """
    n = len(lengths)
    frames = [np.eye(2)]
    with np.errstate(over='ignore', invalid='ignore'):
        for j in range(n):
            step = _translation(lengths[j]) @ _turn(math.pi - angles[(j + 1) % n])
            frames.append(frames[-1] @ step)
    return frames


def holonomy(lengths: Sequence[float], angles: Sequence[float]) -> np.ndarray:
    h = develop(lengths, angles)[-1]
    return h if h[0, 0] + h[1, 1] >= 0 else -h


def closing_residual(lengths: Sequence[float], angles: Sequence[float]) -> np.ndarray:
    """The three independent entries of ``H - I``."""
    h = holonomy(lengths, angles)
    return np.array([h[0, 1], h[1, 0], (h[0, 0] - h[1, 1]) / 2])


def holonomy_residual(lengths: Sequence[float], angles: Sequence[float]) -> float:
    return float(np.max(np.abs(holonomy(lengths, angles) - np.eye(2))))


def solve_closing(fixed: Sequence[float], angles: Sequence[float], seed: Sequence[float]) -> np.ndarray:
    """Damped Newton solve for the last three side lengths given the others."""
    tol = tolerances()
    fixed = np.asarray(fixed, dtype=float)
    x = np.asarray(seed, dtype=float).copy()

    def residual(free):
        r = closing_residual(np.concatenate([fixed, free]), angles)
        if not np.all(np.isfinite(r)):
            raise NoClosingSolutionError("Holonomy overflowed; no closing solution near seed")
        return r

    r = residual(x)
    for iteration in range(tol.newton_max_iter):
        norm = float(np.max(np.abs(r)))
        if norm < tol.solver_tol:
            break
        jac = np.empty((3, 3))
        for col in range(3):
            step = np.zeros(3)
            step[col] = tol.newton_fd_step
            jac[:, col] = (residual(x + step) - residual(x - step)) / (2 * tol.newton_fd_step)
        try:
            delta = np.linalg.solve(jac, -r)
        except np.linalg.LinAlgError as exc:
            raise NoClosingSolutionError("Singular closing Jacobian; no closing solution near seed") from exc

        damping = 1.0
        while damping > 1e-6:
            candidate = x + damping * delta
            if np.all(candidate > 0):
                r_new = closing_residual(np.concatenate([fixed, candidate]), angles)
                if np.all(np.isfinite(r_new)) and np.max(np.abs(r_new)) < norm:
                    x, r = candidate, r_new
                    break
            damping /= 2
        else:
            if norm < tol.matrix_tol:
                # already at round-off level
                break
            raise NoClosingSolutionError(
                "Newton line search stalled; no closing solution near seed",
                iterations=iteration, residual=norm,
            )
    else:
        if np.max(np.abs(r)) >= tol.matrix_tol:
            raise NoClosingSolutionError(
                f"No closing solution near seed after {tol.newton_max_iter} iterations",
                residual=float(np.max(np.abs(r))),
            )
    return np.concatenate([fixed, x])


def _vertices_from_frames(frames: Sequence[np.ndarray]) -> List[HPoint]:
    return [HPoint.from_upper(Isometry(f).apply_upper(1j)) for f in frames[:-1]]


@dataclass(frozen=True)
class Side:
    label: int
    geodesic: Geodesic
    start: HPoint
    end: HPoint
    length: float

    @property
    def endpoints(self) -> Tuple[HPoint, HPoint]:
        return (self.start, self.end)

    def midpoint(self) -> HPoint:
        return einstein_midpoint(self.endpoints)

    def contains_point(self, p: HPoint, margin: float) -> bool:
        """True when ``p`` lies on the open segment, at least ``margin`` from both ends."""
        to_start, to_end = dist(p, self.start), dist(p, self.end)
        return (
            to_start > margin
            and to_end > margin
            and abs(to_start + to_end - self.length) < 1e-7 * max(1.0, self.length)
        )


def _segments_cross(p1, p2, q1, q2) -> bool:
    def orient(a, b, c):
        return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])

    d1, d2 = orient(q1, q2, p1), orient(q1, q2, p2)
    d3, d4 = orient(p1, p2, q1), orient(p1, p2, q2)
    return d1 * d2 < 0 and d3 * d4 < 0


@dataclass(frozen=True, eq=False)
class Table:
    """A convex polygon in the disc used as a billiard table."""
    vertices: Tuple[HPoint, ...]
    angles: Tuple[float, ...]
    sides: Tuple[Side, ...]
    residual: float

    @classmethod
    def from_vertices(cls, vertices: Sequence[HPoint], **extra) -> 'Table':
        vertices = tuple(vertices)
        n = len(vertices)
        if n < 3:
            raise DomainError("A table needs at least three vertices")
        sides = []
        for j in range(n):
            start, end = vertices[j], vertices[(j + 1) % n]
            sides.append(Side(j + 1, geodesic_through(start, end), start, end, dist(start, end)))
        angles = tuple(
            angle_at(vertices[j], vertices[(j + 1) % n], vertices[j - 1]) for j in range(n)
        )
        residual = holonomy_residual([s.length for s in sides], angles)
        return cls(vertices=vertices, angles=angles, sides=tuple(sides), residual=residual, **extra)

    @property
    def n(self) -> int:
        return len(self.sides)

    @property
    def side_lengths(self) -> Tuple[float, ...]:
        return tuple(s.length for s in self.sides)

    def side(self, label: int) -> Side:
        if not 1 <= label <= self.n:
            raise DomainError(f"Side label {label} outside 1..{self.n}")
        return self.sides[label - 1]

    def shared_vertex(self, first: int, second: int) -> Optional[int]:
        """Index of the vertex where sides ``first`` and ``second`` meet, if adjacent."""
        n = self.n
        if second == first % n + 1:
            return first % n
        if first == second % n + 1:
            return second % n
        return None

    def passable_vertices(self) -> Tuple[int, ...]:
        """Corners a trajectory may run through as a double bounce."""
        return ()

    def klein_vertices(self) -> np.ndarray:
        return np.array([klein_point(v) for v in self.vertices])

    def signed_klein_area(self) -> float:
        v = self.klein_vertices()
        x, y = v[:, 0], v[:, 1]
        return float(0.5 * np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))

    def area(self) -> float:
        """Hyperbolic area by Gauss-Bonnet."""
        return (self.n - 2) * math.pi - sum(self.angles)

    def contains(self, klein_points: np.ndarray, tol: float = 1e-12) -> np.ndarray:
        """Vectorised test of Klein-model points against the (convex) table."""
        pts = np.atleast_2d(np.asarray(klein_points, dtype=float))
        v = self.klein_vertices()
        edges = np.roll(v, -1, axis=0) - v
        rel = pts[:, None, :] - v[None, :, :]
        cross = edges[None, :, 0] * rel[:, :, 1] - edges[None, :, 1] * rel[:, :, 0]
        return np.all(cross >= -tol, axis=1)

    def transformed(self, g: Isometry) -> 'Table':
        """Image under an orientation-preserving isometry, labels kept."""
        return self.from_vertices([g.apply(v) for v in self.vertices], **self._extra())

    def _extra(self) -> Dict:
        return {}

    def validate(self) -> None:
        tol = tolerances()
        if self.residual >= 1e-9:
            raise DegeneratePolygonError("Boundary does not close", residual=self.residual)
        if min(self.side_lengths) <= 0:
            raise DegeneratePolygonError("Non-positive side length")
        if self.signed_klein_area() <= 0:
            raise DegeneratePolygonError("Vertices are not in anticlockwise order")
        kv = self.klein_vertices()
        n = self.n
        for i in range(n):
            for j in range(i + 2, n):
                if i == 0 and j == n - 1:
                    continue
                if _segments_cross(kv[i], kv[(i + 1) % n], kv[j], kv[(j + 1) % n]):
                    raise DegeneratePolygonError(f"Sides {i + 1} and {j + 1} intersect")
        if any(a <= tol.angle_tol or a >= math.pi for a in self.angles):
            raise DegeneratePolygonError("Table is not strictly convex")


@dataclass(frozen=True, eq=False)
class RightAngledPolygon(Table):
    k: int

    def _extra(self) -> Dict:
        return {'k': self.k}

    @staticmethod
    def color(label: int) -> str:
        return 'blue' if label % 2 == 1 else 'red'

    def validate(self) -> None:
        super().validate()
        tol = tolerances().angle_tol
        worst = max(abs(a - RIGHT_ANGLE) for a in self.angles)
        if worst > tol:
            raise DegeneratePolygonError("Polygon is not right-angled", worst_angle_error=worst)


@dataclass(frozen=True, eq=False)
class LambertQuad(Table):
    k: int
    acute_vertex_index: int = 3

    def _extra(self) -> Dict:
        return {'k': self.k, 'acute_vertex_index': self.acute_vertex_index}

    @property
    def a(self) -> float:
        return self.sides[0].length

    @property
    def b(self) -> float:
        return self.sides[1].length

    @property
    def t(self) -> float:
        return self.a

    def passable_vertices(self) -> Tuple[int, ...]:
        # spoke meets outer side at a right angle; glued, this is an interior side point
        i = self.acute_vertex_index
        return ((i + 1) % 4, (i + 3) % 4)

    def lambert_defect(self) -> float:
        return abs(math.sinh(self.a) * math.sinh(self.b) - math.cos(math.pi / self.k))

    def validate(self) -> None:
        super().validate()
        tol = tolerances().angle_tol
        expected = lambert_angles(self.k)
        worst = max(abs(a - e) for a, e in zip(self.angles, expected))
        if worst > tol:
            raise DegeneratePolygonError("Quadrilateral angles are not (π/2, π/2, π/2, π/k)", worst_angle_error=worst)
        if self.lambert_defect() > tol:
            raise DegeneratePolygonError("sinh(a)·sinh(b) differs from cos(π/k)", defect=self.lambert_defect())


def _check_k(k: int) -> None:
    if not isinstance(k, (int, np.integer)) or k < 3:
        raise DomainError(f"k must be an integer ≥ 3, got {k!r}")


def regular_side_length(k: int) -> float:
    _check_k(k)
    return 2.0 * math.acosh(math.sqrt(2.0) * math.cos(math.pi / (2 * k)))


def regular_inradius(k: int) -> float:
    """Distance from the centre of the regular right-angled 2k-gon to a side midpoint."""
    _check_k(k)
    return math.acosh(math.cos(math.pi / 4) / math.sin(math.pi / (2 * k)))


def canonical_placement(vertices: Sequence[HPoint]) -> List[HPoint]:
    """Centre the vertices at the origin and put side 1's midpoint on the positive x-axis."""
    centre = einstein_midpoint(vertices)
    to_origin = Isometry.translation_to(centre).inverse()
    moved = [to_origin.apply(v) for v in vertices]
    mid = einstein_midpoint(moved[:2])
    turn = Isometry.rotation(-math.atan2(mid.y, mid.x))
    return [turn.apply(v) for v in moved]


def _right_angled(k: int, lengths: Sequence[float]) -> RightAngledPolygon:
    angles = [RIGHT_ANGLE] * (2 * k)
    vertices = canonical_placement(_vertices_from_frames(develop(lengths, angles)))
    polygon = RightAngledPolygon.from_vertices(vertices, k=k)
    polygon.validate()
    return polygon


def regular_polygon(k: int) -> RightAngledPolygon:
    polygon = _right_angled(k, [regular_side_length(k)] * (2 * k))
    logger.info("✅ Regular right-angled %d-gon built (residual %.2e)", 2 * k, polygon.residual)
    return polygon


def closing_construction(free_sides: Sequence[float]) -> List[float]:
    """The last three sides of a right-angled polygon, built directly.

    Sides 2k-2 and 2k leave the free ends of the chain 1..2k-3 at right
    angles; side 2k-1 is their common perpendicular. There is no polygon
    when those two lines meet or when a foot falls behind its free end.
    """
    frames = develop(free_sides, [RIGHT_ANGLE] * len(free_sides))
    last = Isometry(frames[-1])
    outgoing = geodesic_through(HPoint.from_upper(last.apply_upper(1j)), HPoint.from_upper(last.apply_upper(2j)))
    # the line through i at right angles to side 1 is the unit semicircle
    incoming = geodesic_through(HPoint.from_upper(1j), HPoint.from_upper(0.6 + 0.8j))
    try:
        perpendicular = common_perpendicular(outgoing, incoming)
    except GeometryError as exc:
        raise NoClosingSolutionError(
            f"End perpendiculars are not ultraparallel ({exc.classification}); no closing solution",
        ) from exc
    along = last.inverse().apply_upper(perpendicular.foot1.to_upper())
    back = perpendicular.foot2.to_upper()
    if not (abs(along) > 1.0 and back.real < 0.0):
        raise NoClosingSolutionError("Closing perpendicular falls behind the free sides; no closing solution")
    return [math.log(abs(along)), perpendicular.length, dist(perpendicular.foot2, HPoint(0.0, 0.0))]


def polygon_from_sides(k: int, free_sides: Sequence[float], init: Optional[Sequence[float]] = None) -> RightAngledPolygon:
    """Right-angled 2k-gon with sides 1..2k-3 given; the last three are solved for.

    The direct construction gives the last three sides; Newton then polishes
    them against the holonomy. ``init`` replaces the construction as seed.
    """
    _check_k(k)
    free_sides = [float(s) for s in free_sides]
    if len(free_sides) != 2 * k - 3:
        raise DomainError(f"Expected {2 * k - 3} free side lengths, got {len(free_sides)}")
    if any(not s > 0 for s in free_sides):
        raise DomainError("Side lengths must be positive")
    try:
        seed = list(init) if init is not None else closing_construction(free_sides)
        lengths = solve_closing(free_sides, [RIGHT_ANGLE] * (2 * k), seed)
        polygon = _right_angled(k, lengths)
    except (NoClosingSolutionError, DegeneratePolygonError) as e:
        logger.info("❌ Right-angled %d-gon from sides failed: %s", 2 * k, e)
        raise
    except (DomainError, ValueError, OverflowError) as e:
        logger.info("❌ Right-angled %d-gon from sides failed: %s", 2 * k, e)
        raise DegeneratePolygonError(f"Degenerate polygon: {e}") from e
    return polygon


def side_vector_free(polygon: RightAngledPolygon) -> Tuple[float, ...]:
    """The free parameters (sides 1..2k-3) of a right-angled polygon."""
    return polygon.side_lengths[: 2 * polygon.k - 3]


@dataclass(frozen=True)
class GreenArc:
    target_label: int
    foot1: HPoint
    foot2: HPoint
    length: float


@dataclass(frozen=True)
class GreenDiagonals:
    arcs: Tuple[GreenArc, ...]

    def __len__(self) -> int:
        return len(self.arcs)

    def __iter__(self):
        return iter(self.arcs)


def green_diagonals(polygon: RightAngledPolygon) -> GreenDiagonals:
    """Orthogeodesics from side 1 to sides 5, 7, ..., 2k-3."""
    margin = tolerances().geometric_tol
    first = polygon.side(1)
    arcs = []
    for label in range(5, 2 * polygon.k - 2, 2):
        target = polygon.side(label)
        perpendicular = common_perpendicular(first.geodesic, target.geodesic)
        if not (first.contains_point(perpendicular.foot1, margin) and target.contains_point(perpendicular.foot2, margin)):
            raise DecompositionError(f"Orthogeodesic from side 1 to side {label} leaves the polygon")
        arcs.append(GreenArc(label, perpendicular.foot1, perpendicular.foot2, perpendicular.length))
    return GreenDiagonals(tuple(arcs))


def hexagon_partition(polygon: RightAngledPolygon) -> List[Table]:
    """The k-2 right-angled hexagons cut out by the green diagonals."""
    k = polygon.k
    v = polygon.vertices
    if k == 3:
        return [polygon]
    arcs = {arc.target_label: arc for arc in green_diagonals(polygon)}
    outlines = [[arcs[5].foot1, v[1], v[2], v[3], v[4], arcs[5].foot2]]
    for label in range(5, 2 * k - 4, 2):
        near, far = arcs[label], arcs[label + 2]
        outlines.append([far.foot1, near.foot1, near.foot2, v[label], v[label + 1], far.foot2])
    last = arcs[2 * k - 3]
    outlines.append([v[0], last.foot1, last.foot2, v[2 * k - 3], v[2 * k - 2], v[2 * k - 1]])

    tol = tolerances().angle_tol
    hexagons = []
    for outline in outlines:
        hexagon = Table.from_vertices(outline)
        if max(abs(a - RIGHT_ANGLE) for a in hexagon.angles) > tol:
            raise DecompositionError("Green diagonals do not cut out right-angled hexagons")
        hexagons.append(hexagon)
    return hexagons


def lambert_angles(k: int) -> Tuple[float, ...]:
    return (RIGHT_ANGLE, RIGHT_ANGLE, RIGHT_ANGLE, math.pi / k)


def lambert_companion(k: int, t: float) -> float:
    """The side b with sinh(t)·sinh(b) = cos(π/k)."""
    return math.asinh(math.cos(math.pi / k) / math.sinh(t))


def _lambert_seed(k: int, a: float, b: float) -> List[float]:
    """Exact (b, s3, s4) from the construction around the far right angle."""
    # far corner at the origin, side 1 arriving along +x
    v1 = HPoint(-math.tanh(a / 2), 0.0)
    v3 = HPoint(0.0, math.tanh(b / 2))
    side4 = geodesic_from(v1, math.pi / 2)
    side3 = geodesic_from(v3, 0.0)
    acute = intersection(side3, side4)
    if acute is None:
        raise NoClosingSolutionError("Lambert sides do not meet")
    return [b, dist(v3, acute), dist(acute, v1)]


def lambert_quad(k: int, t: float) -> LambertQuad:
    """Lambert quadrilateral with acute angle π/k; ``t`` is side 1.

    Sides 1 and 2 meet at the right angle opposite the acute vertex and have
    lengths a = t and b; the acute angle sits between sides 3 and 4.
    """
    _check_k(k)
    if not t > 0:
        raise DomainError(f"Lambert parameter t must be positive, got {t}")
    angles = lambert_angles(k)
    b = lambert_companion(k, t)
    lengths = solve_closing([t], angles, _lambert_seed(k, t, b))
    if abs(lengths[1] - b) > tolerances().angle_tol:
        raise NoClosingSolutionError("Closing solve left the Lambert branch", b=b, solved=float(lengths[1]))

    vertices = _vertices_from_frames(develop(lengths, angles))
    acute = vertices[3]
    to_origin = Isometry.translation_to(acute).inverse()
    moved = [to_origin.apply(p) for p in vertices]
    turn = Isometry.rotation(-direction_at(moved[3], moved[0]))
    placed = [turn.apply(p) for p in moved]
    # the acute vertex sits exactly at the centre
    placed[3] = HPoint(0.0, 0.0)
    quad = LambertQuad.from_vertices(placed, k=k)
    quad.validate()
    return quad


def regular_lambert(k: int) -> LambertQuad:
    _check_k(k)
    return lambert_quad(k, math.asinh(math.sqrt(math.cos(math.pi / k))))


@dataclass(frozen=True)
class GlueLayout:
    """How the 2k copies of a Lambert quadrilateral fit together.

    Copy ``c`` is ``copies[c]`` applied to the quadrilateral; sides 3 and 4
    are interior spokes, sides 1 and 2 lie on the outer polygon.
    """
    k: int
    copies: Tuple[Isometry, ...]

    def is_spoke(self, label: int) -> bool:
        return label in (3, 4)

    def neighbour(self, copy: int, label: int) -> int:
        """The copy across spoke ``label`` of ``copy``."""
        m = 2 * self.k
        if label == 3:
            step = 1 if copy % 2 == 0 else -1
        elif label == 4:
            step = -1 if copy % 2 == 0 else 1
        else:
            raise DomainError(f"Side {label} is not a spoke")
        return (copy + step) % m

    def outer_label(self, copy: int, label: int) -> int:
        if label == 1:
            offset = 1 if copy % 2 == 0 else 2
        elif label == 2:
            offset = 2 if copy % 2 == 0 else 1
        else:
            raise DomainError(f"Side {label} is a spoke")
        return (copy + offset - 1) % (2 * self.k) + 1

    def describe(self, copy: int, label: int) -> Tuple[str, int]:
        if self.is_spoke(label):
            return ('spoke', self.neighbour(copy, label))
        return ('outer', self.outer_label(copy, label))


def glue_lambert(quad: LambertQuad) -> Tuple[RightAngledPolygon, GlueLayout]:
    """Glue 2k alternately reflected copies of ``quad`` around its acute vertex."""
    k = quad.k
    mirror = reflection_across(quad.side(3).geodesic)
    step = Isometry.rotation(2 * math.pi / k)
    copies = []
    for c in range(2 * k):
        g = compose_all(*([step] * (c // 2)))
        copies.append(compose(g, mirror) if c % 2 else g)

    # outer vertex j is the far corner of copy j - 1
    far = quad.vertices[1]
    vertices = [copies[(j - 1) % (2 * k)].apply(far) for j in range(2 * k)]
    polygon = RightAngledPolygon.from_vertices(vertices, k=k)
    polygon.validate()
    logger.info("✅ Glued %d Lambert copies into a right-angled %d-gon", 2 * k, 2 * k)
    return polygon, GlueLayout(k, tuple(copies))
