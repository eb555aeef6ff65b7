"""Hyperbolic plane geometry for the billiard tables.

Isometries are real 2x2 matrices acting on the upper half-plane; points are
kept in the Poincaré disc and converted through the Cayley transform
``w = (z - i) / (z + i)``. Ideal points are handled as homogeneous real
vectors ``(u, v)`` standing for ``u / v`` on the real line, so the point at
infinity never needs special casing.

An orientation-reversing isometry ``(M, reversing=True)`` acts by
``z -> M(-conj z)``: the base reflection ``z -> -conj z`` (``w -> conj w``
in the disc) followed by the Möbius map of ``M``. With that convention every
matrix keeps determinant one.
"""

import cmath
import enum
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Tuple

import numpy as np

from .conf import tolerances
from .exceptions import (
    DomainError,
    GeometryError,
    GlideReflectionError,
    NoAxisError,
)

TWO_PI = 2.0 * math.pi

_FLIP = np.diag([1.0, -1.0])


@dataclass(frozen=True)
class HPoint:
    """A point of the Poincaré disc."""
    x: float
    y: float

    def __post_init__(self):
        if not self.x * self.x + self.y * self.y < 1.0:
            raise DomainError(f"Point ({self.x}, {self.y}) is not inside the unit disc")

    @classmethod
    def from_complex(cls, w: complex) -> 'HPoint':
        return cls(float(w.real), float(w.imag))

    @classmethod
    def from_upper(cls, z: complex) -> 'HPoint':
        return cls.from_complex((z - 1j) / (z + 1j))

    @property
    def complex(self) -> complex:
        return complex(self.x, self.y)

    def to_upper(self) -> complex:
        w = self.complex
        return 1j * (1 + w) / (1 - w)

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def as_tuple(self) -> Tuple[float, float]:
        return (self.x, self.y)


class IsometryKind(enum.Enum):
    HYPERBOLIC = 'hyperbolic'
    PARABOLIC = 'parabolic'
    ELLIPTIC = 'elliptic-or-identity'


def _normalized(m) -> np.ndarray:
    m = np.array(m, dtype=float)
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    if det <= 0:
        raise DomainError(f"Isometry matrix must have positive determinant, got {det}")
    return m / math.sqrt(det)


@dataclass(frozen=True, eq=False)
class Isometry:
    matrix: np.ndarray
    reversing: bool = False

    def __post_init__(self):
        m = _normalized(self.matrix)
        m.setflags(write=False)
        object.__setattr__(self, 'matrix', m)

    @classmethod
    def identity(cls) -> 'Isometry':
        return cls(np.eye(2))

    @classmethod
    def rotation(cls, angle: float) -> 'Isometry':
        """Anticlockwise rotation by ``angle`` about the centre of the disc."""
        c, s = math.cos(angle / 2), math.sin(angle / 2)
        return cls(np.array([[c, s], [-s, c]]))

    @classmethod
    def translation_to(cls, p: HPoint) -> 'Isometry':
        """An orientation-preserving isometry taking the disc centre to ``p``."""
        z = p.to_upper()
        r = math.sqrt(z.imag)
        return cls(np.array([[r, z.real / r], [0.0, 1.0 / r]]))

    @property
    def trace(self) -> float:
        return float(self.matrix[0, 0] + self.matrix[1, 1])

    def inverse(self) -> 'Isometry':
        a, b = self.matrix[0]
        c, d = self.matrix[1]
        inv = np.array([[d, -b], [-c, a]])
        if self.reversing:
            inv = _FLIP @ inv @ _FLIP
        return Isometry(inv, self.reversing)

    def __matmul__(self, other: 'Isometry') -> 'Isometry':
        return compose(self, other)

    def apply_upper(self, z: complex) -> complex:
        if self.reversing:
            z = -z.conjugate()
        (a, b), (c, d) = self.matrix
        return (a * z + b) / (c * z + d)

    def apply(self, p: HPoint) -> HPoint:
        return HPoint.from_upper(self.apply_upper(p.to_upper()))

    def apply_boundary(self, vec: np.ndarray) -> np.ndarray:
        """Image of an ideal point given as a homogeneous vector ``(u, v)``."""
        vec = np.asarray(vec, dtype=float)
        if self.reversing:
            vec = np.array([-vec[0], vec[1]])
        return self.matrix @ vec

    def apply_geodesic(self, geodesic: 'Geodesic') -> 'Geodesic':
        first, second = geodesic.boundary_vectors()
        return Geodesic(
            boundary_angle(self.apply_boundary(first)),
            boundary_angle(self.apply_boundary(second)),
        )

    def isclose(self, other: 'Isometry', tol: Optional[float] = None) -> bool:
        """Equality of isometries: matrices agree up to sign."""
        tol = tolerances().matrix_tol if tol is None else tol
        if self.reversing != other.reversing:
            return False
        return bool(
            np.max(np.abs(self.matrix - other.matrix)) < tol
            or np.max(np.abs(self.matrix + other.matrix)) < tol
        )

    def is_identity(self, tol: Optional[float] = None) -> bool:
        return self.isclose(Isometry.identity(), tol)


def compose(g: Isometry, h: Isometry) -> Isometry:
    """The isometry ``g`` after ``h``."""
    inner = h.matrix
    if g.reversing:
        inner = _FLIP @ inner @ _FLIP
    return Isometry(g.matrix @ inner, g.reversing != h.reversing)


def compose_all(*maps: Isometry) -> Isometry:
    """``compose_all(f, g, h)`` is ``f∘g∘h``."""
    result = Isometry.identity()
    for g in maps:
        result = compose(result, g)
    return result


def boundary_vector(theta: float) -> np.ndarray:
    """Homogeneous half-plane coordinates of the ideal point ``e^{i theta}``."""
    return np.array([-math.cos(theta / 2), math.sin(theta / 2)])


def boundary_angle(vec) -> float:
    return (-2.0 * math.atan2(vec[1], vec[0])) % TWO_PI


def _circular_gap(a: float, b: float) -> float:
    gap = abs(a - b) % TWO_PI
    return min(gap, TWO_PI - gap)


@dataclass(frozen=True)
class Geodesic:
    """A complete unoriented geodesic, given by its ideal endpoint angles."""
    theta1: float
    theta2: float

    def __post_init__(self):
        first, second = sorted((self.theta1 % TWO_PI, self.theta2 % TWO_PI))
        if _circular_gap(first, second) <= 1e-12:
            raise DomainError("A geodesic needs two distinct ideal endpoints")
        object.__setattr__(self, 'theta1', first)
        object.__setattr__(self, 'theta2', second)

    def boundary_vectors(self) -> Tuple[np.ndarray, np.ndarray]:
        return boundary_vector(self.theta1), boundary_vector(self.theta2)

    def ideal_points(self) -> Tuple[complex, complex]:
        return cmath.exp(1j * self.theta1), cmath.exp(1j * self.theta2)

    def isclose(self, other: 'Geodesic', tol: Optional[float] = None) -> bool:
        tol = tolerances().geometric_tol if tol is None else tol
        straight = max(_circular_gap(self.theta1, other.theta1), _circular_gap(self.theta2, other.theta2))
        crossed = max(_circular_gap(self.theta1, other.theta2), _circular_gap(self.theta2, other.theta1))
        return min(straight, crossed) < tol

    def shares_endpoint(self, other: 'Geodesic', tol: float) -> bool:
        return any(
            _circular_gap(a, b) < tol
            for a in (self.theta1, self.theta2)
            for b in (other.theta1, other.theta2)
        )

    def crosses(self, other: 'Geodesic') -> bool:
        """True when the two geodesics meet inside the disc."""
        inside = [self.theta1 < t < self.theta2 for t in (other.theta1, other.theta2)]
        return inside[0] != inside[1]


@dataclass(frozen=True)
class Chord:
    """Klein-model image of a geodesic or of a segment of one."""
    p: Tuple[float, float]
    q: Tuple[float, float]


def klein_point(p: HPoint) -> np.ndarray:
    scale = 2.0 / (1.0 + p.x * p.x + p.y * p.y)
    return np.array([scale * p.x, scale * p.y])


def from_klein(k) -> HPoint:
    k = np.asarray(k, dtype=float)
    scale = 1.0 / (1.0 + math.sqrt(max(0.0, 1.0 - float(k @ k))))
    return HPoint(float(k[0] * scale), float(k[1] * scale))


def dist(p: HPoint, q: HPoint) -> float:
    """Hyperbolic distance in the disc."""
    gap = abs(p.complex - q.complex)
    denom = math.sqrt((1.0 - p.x * p.x - p.y * p.y) * (1.0 - q.x * q.x - q.y * q.y))
    return 2.0 * math.asinh(gap / denom)


def classify(g: Isometry, tol: Optional[float] = None) -> IsometryKind:
    tol = tolerances().trace_tol if tol is None else tol
    excess = abs(g.trace) - 2.0
    if excess > tol:
        return IsometryKind.HYPERBOLIC
    if excess >= -tol:
        return IsometryKind.PARABOLIC
    return IsometryKind.ELLIPTIC


def translation_length(g: Isometry) -> float:
    """``2 arccosh(|tr|/2)`` for hyperbolic ``g``; 0 for parabolic and elliptic maps."""
    if g.reversing:
        raise GlideReflectionError("Orientation-reversing isometry: use the glide length via g∘g")
    if classify(g) is not IsometryKind.HYPERBOLIC:
        return 0.0
    return 2.0 * math.acosh(abs(g.trace) / 2.0)


def glide_length(g: Isometry) -> float:
    if not g.reversing:
        return translation_length(g)
    return translation_length(compose(g, g)) / 2.0


def _eigenvector(m: np.ndarray, eigenvalue: float) -> np.ndarray:
    a, b = m[0]
    c, d = m[1]
    candidates = (np.array([b, eigenvalue - a]), np.array([eigenvalue - d, c]))
    vec = max(candidates, key=lambda v: float(v @ v))
    return vec / math.sqrt(float(vec @ vec))


def axis_frame(g: Isometry) -> Tuple[Isometry, float]:
    """A preserving isometry ``B`` with ``B^-1 g B`` translating up the imaginary axis.

    ``B`` sends 0 to the repelling and infinity to the attracting fixed point
    of ``g``; the second return value is the translation length.
    """
    if g.reversing:
        raise NoAxisError("Orientation-reversing isometry has no translation axis; use g∘g")
    if classify(g) is not IsometryKind.HYPERBOLIC:
        raise NoAxisError(f"No axis: |trace| = {abs(g.trace):.12g} is not greater than 2")
    m = g.matrix if g.trace > 0 else -g.matrix
    tr = float(m[0, 0] + m[1, 1])
    root = math.sqrt(tr * tr - 4.0)
    attracting = _eigenvector(m, (tr + root) / 2.0)
    repelling = _eigenvector(m, (tr - root) / 2.0)
    frame = np.column_stack([attracting, repelling])
    if np.linalg.det(frame) < 0:
        frame[:, 1] *= -1
    return Isometry(frame), 2.0 * math.acosh(tr / 2.0)


def axis(g: Isometry) -> Geodesic:
    """The invariant geodesic of a hyperbolic isometry."""
    frame, _ = axis_frame(g)
    return Geodesic(
        boundary_angle(frame.matrix[:, 0]),
        boundary_angle(frame.matrix[:, 1]),
    )


def reflection_across(geodesic: Geodesic) -> Isometry:
    (u1, v1), (u2, v2) = geodesic.boundary_vectors()
    # endpoints are the roots of A x^2 + B x + C
    a = v1 * v2
    b = -(v1 * u2 + u1 * v2)
    c = u1 * u2
    return Isometry(np.array([[b / 2.0, -c], [-a, b / 2.0]]), reversing=True)


def geodesic_through(p: HPoint, q: HPoint) -> Geodesic:
    kp, kq = klein_point(p), klein_point(q)
    d = kq - kp
    aa = float(d @ d)
    if aa == 0.0:
        raise DomainError("A geodesic needs two distinct points")
    bb = 2.0 * float(kp @ d)
    cc = float(kp @ kp) - 1.0
    root = math.sqrt(bb * bb - 4.0 * aa * cc)
    ends = [kp + t * d for t in ((-bb - root) / (2 * aa), (-bb + root) / (2 * aa))]
    return Geodesic(*(math.atan2(e[1], e[0]) for e in ends))


def to_klein_chord(geodesic: Geodesic, clip: Optional[Tuple[HPoint, HPoint]] = None) -> Chord:
    """Straight Klein-model chord of a geodesic, or of the segment between ``clip`` points."""
    if clip is not None:
        first, second = (klein_point(p) for p in clip)
        return Chord(tuple(first), tuple(second))
    return Chord(
        (math.cos(geodesic.theta1), math.sin(geodesic.theta1)),
        (math.cos(geodesic.theta2), math.sin(geodesic.theta2)),
    )


def intersection(first: Geodesic, second: Geodesic) -> Optional[HPoint]:
    """Meeting point of two geodesics, or None when they do not cross."""
    if not first.crosses(second) or first.shares_endpoint(second, 1e-12):
        return None
    c1, c2 = to_klein_chord(first), to_klein_chord(second)
    p, r = np.array(c1.p), np.array(c1.q) - np.array(c1.p)
    q, s = np.array(c2.p), np.array(c2.q) - np.array(c2.p)
    denom = r[0] * s[1] - r[1] * s[0]
    if denom == 0.0:
        return None
    t = ((q - p)[0] * s[1] - (q - p)[1] * s[0]) / denom
    point = p + t * r
    if float(point @ point) >= 1.0:
        return None
    return from_klein(point)


def _frame_for(geodesic: Geodesic) -> Isometry:
    """A preserving isometry mapping the imaginary axis onto ``geodesic``."""
    first, second = geodesic.boundary_vectors()
    frame = np.column_stack([second, first])
    if np.linalg.det(frame) < 0:
        frame[:, 0] *= -1
    return Isometry(frame)


def distance_to_geodesic(p: HPoint, geodesic: Geodesic) -> float:
    z = _frame_for(geodesic).inverse().apply_upper(p.to_upper())
    return math.asinh(abs(z.real) / z.imag)


def project_to_geodesic(p: HPoint, geodesic: Geodesic) -> HPoint:
    """Foot of the perpendicular from ``p`` to ``geodesic``."""
    frame = _frame_for(geodesic)
    z = frame.inverse().apply_upper(p.to_upper())
    return HPoint.from_upper(frame.apply_upper(1j * abs(z)))


class Perpendicular(NamedTuple):
    geodesic: Geodesic
    length: float
    foot1: HPoint
    foot2: HPoint


def common_perpendicular(first: Geodesic, second: Geodesic) -> Perpendicular:
    if first.crosses(second):
        raise GeometryError("Geodesics intersect; no common perpendicular", classification='intersecting')
    if first.shares_endpoint(second, tolerances().geometric_tol):
        raise GeometryError("Geodesics are asymptotic; no common perpendicular", classification='asymptotic')
    g = compose(reflection_across(first), reflection_across(second))
    try:
        perpendicular = axis(g)
    except NoAxisError as exc:
        raise GeometryError(f"Geodesics are not ultraparallel: {exc}", classification='asymptotic') from exc
    foot1 = intersection(perpendicular, first)
    foot2 = intersection(perpendicular, second)
    if foot1 is None or foot2 is None:
        raise GeometryError("Perpendicular misses one of the geodesics", classification='asymptotic')
    return Perpendicular(perpendicular, translation_length(g) / 2.0, foot1, foot2)


def _to_origin(p: complex, w: complex) -> complex:
    return (w - p) / (1 - p.conjugate() * w)


def direction_at(p: HPoint, target) -> float:
    """Angle of the unit tangent at ``p`` pointing to ``target`` (a point or ideal point)."""
    w = target.complex if isinstance(target, HPoint) else complex(target)
    return cmath.phase(_to_origin(p.complex, w))


def angle_between(first: float, second: float) -> float:
    """Unsigned angle in [0, pi] between two directions."""
    gap = abs(first - second) % TWO_PI
    return min(gap, TWO_PI - gap)


def angle_at(vertex: HPoint, p, q) -> float:
    """Angle at ``vertex`` between the geodesics towards ``p`` and towards ``q``."""
    return angle_between(direction_at(vertex, p), direction_at(vertex, q))


def geodesic_from(p: HPoint, direction: float) -> Geodesic:
    """The geodesic through ``p`` whose tangent at ``p`` has angle ``direction``."""
    w = p.complex
    ends = []
    for theta in (direction, direction + math.pi):
        e = cmath.exp(1j * theta)
        ends.append(cmath.phase((e + w) / (1 + w.conjugate() * e)))
    return Geodesic(*ends)


def einstein_midpoint(points) -> HPoint:
    """Barycentre of points, averaged in the Klein model with Lorentz weights."""
    klein = np.array([klein_point(p) for p in points])
    weights = 1.0 / np.sqrt(1.0 - np.sum(klein * klein, axis=1))
    return from_klein(weights @ klein / weights.sum())
