"""Filling check for a family of trajectories inside a table.

Everything happens in the Klein model, where trajectory segments and table
sides are straight. The segments are split at their crossings, nearby
vertices are merged with a KD-tree, and the faces of the resulting planar
subdivision are traced with half-edges.
"""

import enum
import logging
import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Tuple

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree

from .billiard import BilliardTrajectory
from .conf import tolerances
from .exceptions import DegenerateArrangementError
from .hypgeo import angle_at, from_klein, klein_point
from .polygon import Table

logger = logging.getLogger(__name__)

TRAJECTORY = 'trajectory'


def side_tag(label: int) -> str:
    return f'side:{label}'


class FaceClass(enum.Enum):
    PURE_DISC = 'pure-disc'
    EDGE_DISC = 'edge-disc'
    CORNER_DISC = 'corner-disc'
    INVALID = 'invalid'


@dataclass
class Face:
    vertices: List[int]
    edge_tags: List[FrozenSet[str]]
    points: np.ndarray

    def signed_area(self) -> float:
        x, y = self.points[:, 0], self.points[:, 1]
        return float(0.5 * np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))

    def side_labels(self) -> set:
        labels = set()
        for tags in self.edge_tags:
            labels.update(int(t.split(':')[1]) for t in tags if t.startswith('side:'))
        return labels

    def area(self) -> float:
        """Hyperbolic area by Gauss-Bonnet; straight-through vertices contribute nothing."""
        poincare = [from_klein(p) for p in self.points]
        m = len(poincare)
        total = sum(angle_at(poincare[i], poincare[(i + 1) % m], poincare[i - 1]) for i in range(m))
        return (m - 2) * math.pi - total


@dataclass
class Arrangement:
    vertices: np.ndarray
    edges: List[Tuple[int, int, FrozenSet[str]]]
    faces: List[Face]
    polygon_vertex_ids: Tuple[int, ...]
    warnings: List[str] = field(default_factory=list)

    @property
    def euler_characteristic(self) -> int:
        # bounded faces plus the outer one
        return len(self.vertices) - len(self.edges) + len(self.faces) + 1


@dataclass
class FillingReport:
    classes: List[FaceClass]
    is_filling: bool
    euler_characteristic: int
    face_areas: List[float]
    polygon_area: float
    warnings: List[str]

    @property
    def area_sum(self) -> float:
        return float(sum(self.face_areas))


def _cross(a: np.ndarray, b: np.ndarray) -> float:
    return float(a[0] * b[1] - a[1] * b[0])


def _collect_segments(table: Table, family: Iterable[BilliardTrajectory], snap: float):
    kv = table.klein_vertices()
    n = len(kv)
    segments = [(kv[i], kv[(i + 1) % n], side_tag(i + 1)) for i in range(n)]
    seen: List[Tuple[np.ndarray, np.ndarray]] = []
    for traj in family:
        for start, end in traj.segments():
            p, q = klein_point(start), klein_point(end)
            duplicate = any(
                (np.max(np.abs(p - a)) < snap and np.max(np.abs(q - b)) < snap)
                or (np.max(np.abs(p - b)) < snap and np.max(np.abs(q - a)) < snap)
                for a, b in seen
            )
            if not duplicate:
                seen.append((p, q))
                segments.append((p, q, TRAJECTORY))
    return segments


def _intersect(seg1, seg2, snap: float):
    """Crossing parameters (t, u) of two straight segments, or None."""
    p, r = seg1[0], seg1[1] - seg1[0]
    q, s = seg2[0], seg2[1] - seg2[0]
    denom = _cross(r, s)
    norm_r, norm_s = np.hypot(*r), np.hypot(*s)
    if abs(denom) <= 1e-14 * norm_r * norm_s:
        if abs(_cross(q - p, r)) / norm_r > snap:
            return None
        # collinear: only a shared endpoint is acceptable
        lo = float(np.dot(q - p, r) / norm_r ** 2)
        hi = float(np.dot(q + s - p, r) / norm_r ** 2)
        overlap = min(1.0, max(lo, hi)) - max(0.0, min(lo, hi))
        if overlap * norm_r > snap:
            raise DegenerateArrangementError(
                f"Segments overlap along a common line ({seg1[2]} and {seg2[2]})",
                location=[float(x) for x in p],
            )
        return None
    t = _cross(q - p, s) / denom
    u = _cross(q - p, r) / denom
    eps_t, eps_u = snap / norm_r, snap / norm_s
    if -eps_t <= t <= 1 + eps_t and -eps_u <= u <= 1 + eps_u:
        return min(1.0, max(0.0, t)), min(1.0, max(0.0, u))
    return None


def build_arrangement(table: Table, family: Iterable[BilliardTrajectory]) -> Arrangement:
    snap = tolerances().snap_tol
    segments = _collect_segments(table, list(family), snap)

    # parameter values along every segment, endpoints first
    stops: List[List[Tuple[float, int]]] = [[] for _ in segments]
    points: List[np.ndarray] = []

    def add(point, owner, t):
        points.append(np.asarray(point, dtype=float))
        stops[owner].append((t, len(points) - 1))

    for i, seg in enumerate(segments):
        add(seg[0], i, 0.0)
        add(seg[1], i, 1.0)
    for i in range(len(segments)):
        for j in range(i + 1, len(segments)):
            hit = _intersect(segments[i], segments[j], snap)
            if hit is None:
                continue
            t, u = hit
            point = segments[i][0] + t * (segments[i][1] - segments[i][0])
            add(point, i, t)
            stops[j].append((u, len(points) - 1))

    raw = np.array(points)
    tree = cKDTree(raw)
    pairs = np.array(sorted(tree.query_pairs(snap)), dtype=int).reshape(-1, 2)
    graph = coo_matrix((np.ones(len(pairs)), (pairs[:, 0], pairs[:, 1])), shape=(len(raw), len(raw)))
    count, cluster = connected_components(graph, directed=False)
    vertices = np.array([raw[cluster == c].mean(axis=0) for c in range(count)])

    warnings = []
    near = cKDTree(vertices).query_pairs(1e3 * snap)
    for a, b in sorted(near):
        message = f"Near-degenerate vertices at {vertices[a].tolist()} and {vertices[b].tolist()}"
        warnings.append(message)
        logger.warning("❌ %s", message)

    edge_tags: Dict[Tuple[int, int], set] = defaultdict(set)
    for seg, seg_stops in zip(segments, stops):
        ordered = [cluster[idx] for _, idx in sorted(seg_stops)]
        chain = [v for i, v in enumerate(ordered) if i == 0 or v != ordered[i - 1]]
        for u, v in zip(chain, chain[1:]):
            edge_tags[(min(u, v), max(u, v))].add(seg[2])
    for key, tags in edge_tags.items():
        if TRAJECTORY in tags and len(tags) > 1:
            raise DegenerateArrangementError("A trajectory runs along a table side", location=vertices[key[0]].tolist())
    edges = [(u, v, frozenset(tags)) for (u, v), tags in sorted(edge_tags.items())]

    polygon_ids = tuple(int(cluster[2 * i]) for i in range(table.n))
    faces = _trace_faces(vertices, edges)
    arrangement = Arrangement(vertices, edges, faces, polygon_ids, warnings)
    if arrangement.euler_characteristic != 2:
        raise DegenerateArrangementError(
            f"Subdivision fails Euler's formula (V - E + F = {arrangement.euler_characteristic})"
        )
    return arrangement


def _trace_faces(vertices: np.ndarray, edges) -> List[Face]:
    around: Dict[int, List[int]] = defaultdict(list)
    tags = {}
    for u, v, t in edges:
        around[u].append(v)
        around[v].append(u)
        tags[(u, v)] = tags[(v, u)] = t
    for v, neighbours in around.items():
        neighbours.sort(key=lambda w: math.atan2(*(vertices[w] - vertices[v])[::-1]))

    faces = []
    visited = set()
    for start in tags:
        if start in visited:
            continue
        cycle = []
        half = start
        while half not in visited:
            visited.add(half)
            cycle.append(half)
            u, v = half
            ring = around[v]
            half = (v, ring[(ring.index(u) - 1) % len(ring)])
        ids = [u for u, _ in cycle]
        face = Face(ids, [tags[h] for h in cycle], vertices[ids])
        if face.signed_area() > 0:
            faces.append(face)
    return faces


def classify_face(face: Face, polygon_ids: Tuple[int, ...]) -> FaceClass:
    labels = face.side_labels()
    n = len(polygon_ids)
    corners = [i for i, vid in enumerate(polygon_ids) if vid in face.vertices]
    if not labels:
        return FaceClass.PURE_DISC
    if len(labels) == 1 and not corners:
        return FaceClass.EDGE_DISC
    if len(labels) == 2 and len(corners) == 1:
        # corner i ends side i and starts side i + 1
        corner = corners[0]
        if labels == {corner or n, corner + 1}:
            return FaceClass.CORNER_DISC
    return FaceClass.INVALID


def classify_faces(arrangement: Arrangement) -> Tuple[List[FaceClass], bool]:
    classes = [classify_face(face, arrangement.polygon_vertex_ids) for face in arrangement.faces]
    return classes, all(c is not FaceClass.INVALID for c in classes)


def filling_report(table: Table, family: Iterable[BilliardTrajectory]) -> FillingReport:
    arrangement = build_arrangement(table, family)
    classes, is_filling = classify_faces(arrangement)
    areas = [face.area() for face in arrangement.faces]
    report = FillingReport(
        classes=classes,
        is_filling=is_filling,
        euler_characteristic=arrangement.euler_characteristic,
        face_areas=areas,
        polygon_area=table.area(),
        warnings=list(arrangement.warnings),
    )
    marker = '✅' if is_filling else '❌'
    logger.info("%s %d faces, filling=%s", marker, len(classes), is_filling)
    return report
