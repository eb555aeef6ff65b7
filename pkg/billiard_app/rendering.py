"""SVG pictures of tables and trajectories in the Poincaré disc.

Geodesic segments are drawn as arcs of circles orthogonal to the unit circle
(straight lines through the centre). The page is assembled by the
``billiard_app/disc.svg`` template.
"""

import math
from dataclasses import dataclass
from typing import Iterable, List, Optional

from django.template.loader import render_to_string

from .billiard import BilliardTrajectory
from .hypgeo import HPoint
from .polygon import GreenDiagonals, RightAngledPolygon, Table

BLUE = '#1f5fbf'
RED = '#c62828'
GREEN = '#2e7d32'
GREY = '#555555'
TRAJECTORY_COLOURS = ('#000000', '#6a1b9a', '#ef6c00', '#00838f', '#5d4037', '#ad1457')


@dataclass(frozen=True)
class Canvas:
    size: int = 600
    margin: int = 20

    @property
    def radius(self) -> float:
        return self.size / 2 - self.margin

    def xy(self, w: complex):
        # screen y grows downwards
        return (self.size / 2 + self.radius * w.real, self.size / 2 - self.radius * w.imag)


def _fmt(x: float) -> str:
    return f"{x:.4f}"


def geodesic_path(canvas: Canvas, p: HPoint, q: HPoint) -> str:
    """SVG path data for the geodesic segment from ``p`` to ``q``."""
    z1, z2 = p.complex, q.complex
    x1, y1 = canvas.xy(z1)
    x2, y2 = canvas.xy(z2)
    cross = (z1.conjugate() * z2).imag
    if abs(cross) < 1e-12:
        return f"M {_fmt(x1)} {_fmt(y1)} L {_fmt(x2)} {_fmt(y2)}"
    centre = (z2 * (1 + abs(z1) ** 2) - z1 * (1 + abs(z2) ** 2)) / (2j * cross)
    r = math.sqrt(abs(centre) ** 2 - 1)
    turn = ((z1 - centre).conjugate() * (z2 - centre)).imag
    sweep = 1 if turn > 0 else 0
    return (
        f"M {_fmt(x1)} {_fmt(y1)} "
        f"A {_fmt(r * canvas.radius)} {_fmt(r * canvas.radius)} 0 0 {sweep} {_fmt(x2)} {_fmt(y2)}"
    )


def _side_colour(table: Table, label: int) -> str:
    if isinstance(table, RightAngledPolygon):
        return BLUE if RightAngledPolygon.color(label) == 'blue' else RED
    return GREY


def render_svg(table: Table, trajectories: Iterable[BilliardTrajectory] = (),
               green: Optional[GreenDiagonals] = None, canvas: Optional[Canvas] = None,
               title: str = '') -> str:
    canvas = canvas or Canvas()
    sides = [
        {'d': geodesic_path(canvas, s.start, s.end), 'colour': _side_colour(table, s.label), 'label': s.label}
        for s in table.sides
    ]
    labels = []
    for s in table.sides:
        x, y = canvas.xy(s.midpoint().complex * 0.92)
        labels.append({'x': _fmt(x), 'y': _fmt(y), 'text': s.label})
    diagonals = [geodesic_path(canvas, arc.foot1, arc.foot2) for arc in (green or ())]

    paths: List[dict] = []
    bounces: List[dict] = []
    for index, traj in enumerate(trajectories):
        colour = TRAJECTORY_COLOURS[index % len(TRAJECTORY_COLOURS)]
        for start, end in traj.segments():
            paths.append({'d': geodesic_path(canvas, start, end), 'colour': colour})
        for p in traj.bounce_points:
            x, y = canvas.xy(p.complex)
            bounces.append({'x': _fmt(x), 'y': _fmt(y), 'colour': colour})

    centre = canvas.size / 2
    return render_to_string('billiard_app/disc.svg', {
        'size': canvas.size,
        'centre': _fmt(centre),
        'radius': _fmt(canvas.radius),
        'title': title,
        'sides': sides,
        'labels': labels,
        'green': diagonals,
        'green_colour': GREEN,
        'trajectories': paths,
        'bounces': bounces,
    })
