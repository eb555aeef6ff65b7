import logging
from typing import Optional, Sequence, Tuple

from .billiard import (
    BilliardSequence,
    BilliardTrajectory,
    CyclicFamily,
    GluedLift,
    ScalingCheck,
    cyclic_family,
    lift_sequence_to_polygon,
    scaling_relation,
    trajectory,
)
from .exceptions import BilliardsError, DomainError
from .filling import FillingReport, filling_report
from .optimize import (
    LocalMinimality,
    MinimizationResult,
    ObjectiveSpec,
    local_minimality,
    minimize_lambert,
    minimize_polygon,
)
from .polygon import (
    GlueLayout,
    GreenDiagonals,
    LambertQuad,
    RightAngledPolygon,
    Table,
    glue_lambert,
    green_diagonals,
    lambert_quad,
    polygon_from_sides,
    regular_polygon,
)
from .surface import FNCoordinates, LiftCount, check_lift_geometry, fn_coordinates, in_billiard_space, lift_count

logger = logging.getLogger(__name__)

TABLE_MODES = ('regular', 'from-sides', 'lambert', 'glue-lambert')


class TableService:
    """Service for building billiard tables"""

    def build(self, mode: str, k: int, sides: Optional[Sequence[float]] = None,
              t: Optional[float] = None) -> Tuple[Table, Optional[GlueLayout]]:
        """Build a table by construction mode; the layout is only set for glued tables"""
        try:
            if mode == 'regular':
                table, layout = regular_polygon(k), None
            elif mode == 'from-sides':
                if not sides:
                    raise DomainError("from-sides needs --sides")
                table, layout = polygon_from_sides(k, sides), None
            elif mode == 'lambert':
                table, layout = lambert_quad(k, self._require_t(t)), None
            elif mode == 'glue-lambert':
                table, layout = glue_lambert(lambert_quad(k, self._require_t(t)))
            else:
                raise DomainError(f"Unknown table mode: {mode}")
            logger.info("✅ Built %s table with %d sides", mode, table.n)
            return table, layout
        except (BilliardsError, ValueError) as e:
            logger.error("❌ Table construction failed (%s, k = %s): %s", mode, k, e)
            raise

    def for_run(self, k: int, sides: Optional[Sequence[float]] = None, t: Optional[float] = None) -> Table:
        """The table a run works on: Lambert if ``t`` is given, from sides if given, else regular"""
        if t is not None:
            return self.build('lambert', k, t=t)[0]
        if sides:
            return self.build('from-sides', k, sides=sides)[0]
        return self.build('regular', k)[0]

    def right_angled(self, k: int, sides: Optional[Sequence[float]] = None) -> RightAngledPolygon:
        return self.build('from-sides' if sides else 'regular', k, sides=sides)[0]

    def green(self, polygon: RightAngledPolygon) -> GreenDiagonals:
        try:
            return green_diagonals(polygon)
        except BilliardsError as e:
            logger.error("❌ Green diagonals failed: %s", e)
            raise

    @staticmethod
    def _require_t(t: Optional[float]) -> float:
        if t is None:
            raise DomainError("Lambert tables need --t")
        return t


class TrajectoryService:
    """Service for computing trajectories and their rotation families"""

    def trajectory(self, table: Table, sequence: BilliardSequence) -> BilliardTrajectory:
        try:
            traj = trajectory(table, sequence)
            logger.info("✅ Trajectory %s has length %.12g", sequence, traj.total_length)
            return traj
        except BilliardsError as e:
            logger.warning("❌ Sequence %s is not realised: %s", sequence, e)
            raise

    def family(self, table: Table, sequence: BilliardSequence) -> CyclicFamily:
        try:
            family = cyclic_family(table, sequence)
            logger.info("✅ Family of %s: %d members, average %.12g",
                        sequence, len(family.members), family.average_length)
            return family
        except BilliardsError as e:
            logger.warning("❌ Family of %s is invalid: %s", sequence, e)
            raise


class SurfaceService:
    """Service for lifts to the glued surface and its coordinates"""

    def __init__(self):
        self.trajectories = TrajectoryService()

    def lift(self, table: Table, sequence: BilliardSequence) -> Tuple[LiftCount, Optional[str]]:
        """Lift count of the trajectory of ``sequence`` plus any stabiliser disagreement"""
        traj = self.trajectories.trajectory(table, sequence)
        count = lift_count(sequence, traj.total_length)
        mismatch = check_lift_geometry(traj)
        logger.info("✅ %s lifts to %d closed geodesics", sequence, count.count)
        return count, mismatch

    def glued_lift(self, quad: LambertQuad, sequence: BilliardSequence) -> Tuple[GluedLift, ScalingCheck]:
        try:
            lift = lift_sequence_to_polygon(quad, sequence)
            check = scaling_relation(quad, sequence)
            logger.info("✅ %s lifts to %s on the glued polygon (%d passes)", sequence, lift.sequence, lift.passes)
            return lift, check
        except BilliardsError as e:
            logger.warning("❌ Glued lift of %s failed: %s", sequence, e)
            raise

    def coordinates(self, polygon: RightAngledPolygon) -> Tuple[FNCoordinates, bool]:
        try:
            coords = fn_coordinates(polygon)
            return coords, in_billiard_space(coords)
        except BilliardsError as e:
            logger.error("❌ Coordinates failed: %s", e)
            raise


class FillingService:
    """Service for the filling check of a trajectory or its rotation orbit"""

    def __init__(self):
        self.trajectories = TrajectoryService()

    def check(self, table: Table, sequence: BilliardSequence, orbit: bool = False) -> FillingReport:
        if orbit:
            members = self.trajectories.family(table, sequence).members
        else:
            members = (self.trajectories.trajectory(table, sequence),)
        try:
            return filling_report(table, members)
        except BilliardsError as e:
            logger.error("❌ Filling check failed for %s: %s", sequence, e)
            raise


class OptimizationService:
    """Service for the minimal-average-length searches"""

    def minimize(self, k: int, sequence: BilliardSequence, starts: Optional[int] = None,
                 seed: Optional[int] = None) -> Tuple[MinimizationResult, LocalMinimality]:
        spec = ObjectiveSpec.default(k, sequence)
        try:
            result = minimize_polygon(spec, random_starts=starts, seed=seed)
            check = local_minimality(spec, result.argmin)
            if not check.is_local_minimum:
                logger.warning("❌ Some perturbation of the argmin does not increase the average")
            return result, check
        except BilliardsError as e:
            logger.error("❌ Minimisation failed for %s (k = %d): %s", sequence, k, e)
            raise

    def minimize_lambert(self, k: int, sequence: BilliardSequence,
                         t_range: Optional[Tuple[float, float]] = None) -> MinimizationResult:
        try:
            return minimize_lambert(k, sequence, t_range)
        except BilliardsError as e:
            logger.error("❌ Lambert search failed for %s (k = %d): %s", sequence, k, e)
            raise
