"""JSON representations of tables, trajectories and results.

Dicts are built with a fixed key order and every float is rounded to
``settings.FLOAT_SIGNIFICANT_DIGITS`` significant digits, so identical runs
produce byte-identical files.
"""

import json
import math
from typing import Any, Dict, Iterable, Optional

from django.conf import settings

from .billiard import BilliardTrajectory, CyclicFamily, GluedLift, ScalingCheck
from .exceptions import DomainError
from .filling import FillingReport
from .hypgeo import HPoint
from .optimize import LocalMinimality, MinimizationResult
from .polygon import GlueLayout, GreenDiagonals, LambertQuad, RightAngledPolygon, Table
from .surface import FNCoordinates, LiftCount


def _digits() -> int:
    return getattr(settings, 'FLOAT_SIGNIFICANT_DIGITS', 15)


def num(x: float) -> Any:
    x = float(x)
    if not math.isfinite(x):
        return str(x)
    return float(f"{x:.{_digits()}g}")


def nums(values: Iterable[float]) -> list:
    return [num(v) for v in values]


def point_to_list(p: HPoint) -> list:
    return [num(p.x), num(p.y)]


def table_to_dict(table: Table) -> Dict:
    if isinstance(table, RightAngledPolygon):
        kind = 'right-angled'
    elif isinstance(table, LambertQuad):
        kind = 'lambert'
    else:
        kind = 'table'
    data = {
        'kind': kind,
        'k': getattr(table, 'k', None),
        'vertices': [point_to_list(v) for v in table.vertices],
        'side_lengths': nums(table.side_lengths),
        'angles': nums(table.angles),
        'holonomy_residual': num(table.residual),
        'area': num(table.area()),
    }
    if isinstance(table, RightAngledPolygon):
        data['colors'] = [RightAngledPolygon.color(s.label) for s in table.sides]
    if isinstance(table, LambertQuad):
        data['a'] = num(table.a)
        data['b'] = num(table.b)
        data['acute_vertex_index'] = table.acute_vertex_index
    return data


def table_from_dict(data: Dict) -> Table:
    try:
        vertices = [HPoint(float(x), float(y)) for x, y in data['vertices']]
        kind = data.get('kind', 'table')
    except (KeyError, TypeError, ValueError) as e:
        raise DomainError(f"Malformed table record: {e}") from e
    if kind == 'right-angled':
        return RightAngledPolygon.from_vertices(vertices, k=int(data['k']))
    if kind == 'lambert':
        return LambertQuad.from_vertices(
            vertices, k=int(data['k']), acute_vertex_index=int(data.get('acute_vertex_index', 3))
        )
    return Table.from_vertices(vertices)


def layout_to_dict(layout: GlueLayout) -> Dict:
    copies = []
    for c in range(2 * layout.k):
        copies.append({
            'copy': c,
            'sides': {str(label): list(layout.describe(c, label)) for label in (1, 2, 3, 4)},
        })
    return {'k': layout.k, 'copies': copies}


def green_to_dict(diagonals: GreenDiagonals) -> list:
    return [
        {
            'to_side': arc.target_label,
            'foot1': point_to_list(arc.foot1),
            'foot2': point_to_list(arc.foot2),
            'length': num(arc.length),
        }
        for arc in diagonals
    ]


def trajectory_to_dict(traj: BilliardTrajectory) -> Dict:
    return {
        'sequence': list(traj.sequence),
        'parity': traj.parity,
        'total_length': num(traj.total_length),
        'segment_lengths': nums(traj.segment_lengths),
        'bounce_points': [point_to_list(p) for p in traj.bounce_points],
        'reflection_angles': [nums(pair) for pair in traj.reflection_angles],
        'corner_passages': list(traj.corner_passages),
        'word': {
            'matrix': [nums(row) for row in traj.word.matrix],
            'reversing': traj.word.reversing,
        },
    }


def family_to_dict(family: CyclicFamily) -> Dict:
    return {
        'base': list(family.base),
        'size': len(family.members),
        'distinct': family.distinct_count,
        'average_length': num(family.average_length),
        'members': [
            {'sequence': list(m.sequence), 'total_length': num(m.total_length)} for m in family.members
        ],
    }


def lift_to_dict(lift: LiftCount) -> Dict:
    return {
        'count': lift.count,
        'per_lift_length': num(lift.per_lift_length),
        'deck_word': lift.deck_word.name,
        'passes': lift.itinerary.passes,
        'itinerary': [list(step) for step in lift.itinerary.steps],
        'stabilizer': [d.name for d in lift.stabilizer],
    }


def glued_lift_to_dict(lift: GluedLift, check: Optional[ScalingCheck] = None) -> Dict:
    data = {
        'sequence': list(lift.sequence),
        'passes': lift.passes,
        'family_size': lift.family_size,
        'copies': list(lift.copies),
    }
    if check is not None:
        data['glued_average'] = num(check.glued_average)
        data['pair_average'] = num(check.pair_average)
        data['lhs'] = num(check.lhs)
        data['rhs'] = num(check.rhs)
    return data


def fn_to_dict(coords: FNCoordinates, in_space: bool) -> Dict:
    return {
        'k': coords.k,
        'genus': coords.genus,
        'curve_count': coords.curve_count,
        'alpha_lengths': nums(coords.alpha_lengths),
        'beta_lengths': nums(coords.beta_lengths),
        'delta_lengths': [nums(pair) for pair in coords.delta_lengths],
        'twists': nums(coords.twists),
        'in_billiard_space': in_space,
    }


def filling_to_dict(report: FillingReport) -> Dict:
    return {
        'is_filling': report.is_filling,
        'faces': len(report.classes),
        'classes': [c.value for c in report.classes],
        'euler_characteristic': report.euler_characteristic,
        'face_areas': nums(report.face_areas),
        'area_sum': num(report.area_sum),
        'polygon_area': num(report.polygon_area),
        'warnings': list(report.warnings),
    }


def minimization_to_dict(result: MinimizationResult, check: Optional[LocalMinimality] = None) -> Dict:
    data = {
        'argmin': nums(result.argmin),
        'sides': nums(result.sides),
        'value': num(result.value),
        'iterations': result.iterations,
        'converged': result.converged,
        'distance_to_regular': num(result.distance_to_regular),
        'starts': result.starts,
    }
    if check is not None:
        data['local_minimum'] = check.is_local_minimum
        data['perturbation_increases'] = nums(check.increases)
    return data


def dumps(payload: Dict) -> str:
    return json.dumps(payload, indent=2, ensure_ascii=False) + '\n'
