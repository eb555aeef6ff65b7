"""Minimisation of average trajectory length over table shapes.

Right-angled 2k-gons are parameterised by their first 2k-3 side lengths and
searched with multi-start Nelder-Mead; Lambert quadrilaterals have a single
parameter and get a golden-section search. Invalid shapes evaluate to a
large penalty instead of raising.
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from .billiard import BilliardSequence, cyclic_family, reflective_pair
from .conf import tolerances
from .exceptions import BilliardsError, DomainError, OptimizationFailedError
from .polygon import lambert_quad, polygon_from_sides, regular_side_length

logger = logging.getLogger(__name__)

BOX_LOWER = 0.2
BOX_UPPER = 4.0


@dataclass(frozen=True)
class ObjectiveSpec:
    k: int
    sequence: BilliardSequence
    lower: Tuple[float, ...]
    upper: Tuple[float, ...]
    penalty: float

    @classmethod
    def default(cls, k: int, sequence: BilliardSequence, penalty: Optional[float] = None) -> 'ObjectiveSpec':
        side = regular_side_length(k)
        size = 2 * k - 3
        spec = cls(
            k=k,
            sequence=sequence,
            lower=tuple([BOX_LOWER * side] * size),
            upper=tuple([BOX_UPPER * side] * size),
            penalty=tolerances().penalty if penalty is None else penalty,
        )
        spec.validate()
        return spec

    @property
    def dimension(self) -> int:
        return 2 * self.k - 3

    def regular_params(self) -> np.ndarray:
        return np.full(self.dimension, regular_side_length(self.k))

    def in_box(self, params: Sequence[float]) -> bool:
        params = np.asarray(params, dtype=float)
        return bool(np.all(params >= self.lower) and np.all(params <= self.upper))

    def validate(self) -> None:
        if len(self.lower) != self.dimension or len(self.upper) != self.dimension:
            raise DomainError(f"Parameter box must have {self.dimension} coordinates")
        if min(self.lower) <= 0:
            raise DomainError("Parameter box must be positive")
        regular = self.regular_params()
        if not (np.all(regular > self.lower) and np.all(regular < self.upper)):
            raise DomainError("Regular polygon must lie inside the parameter box")


@dataclass(frozen=True)
class MinimizationResult:
    argmin: Tuple[float, ...]
    value: float
    iterations: int
    converged: bool
    distance_to_regular: float
    sides: Tuple[float, ...] = ()
    starts: int = 1


def avg_length_objective(spec: ObjectiveSpec, params: Sequence[float]) -> float:
    """Family average length of the polygon with free sides ``params``; penalty when invalid."""
    if not spec.in_box(params):
        return spec.penalty
    try:
        polygon = polygon_from_sides(spec.k, params)
        return cyclic_family(polygon, spec.sequence).average_length
    except (BilliardsError, ValueError) as e:
        logger.debug("Penalised objective at %s: %s", list(params), e)
        return spec.penalty


def _simplex_diameter(simplex: np.ndarray) -> float:
    return float(np.max(np.abs(simplex - simplex[0])))


def _run_nelder_mead(spec: ObjectiveSpec, start: np.ndarray):
    return minimize(
        lambda x: avg_length_objective(spec, x),
        start,
        method='Nelder-Mead',
        options={'xatol': 1e-9, 'fatol': 1e-11, 'maxiter': 4000, 'maxfev': 8000, 'adaptive': spec.dimension > 3},
    )


def minimize_polygon(spec: ObjectiveSpec, random_starts: Optional[int] = None, seed: Optional[int] = None) -> MinimizationResult:
    tol = tolerances()
    random_starts = tol.random_starts if random_starts is None else random_starts
    rng = np.random.default_rng(tol.default_seed if seed is None else seed)
    regular = spec.regular_params()
    starts = [regular]
    for _ in range(random_starts):
        perturbed = regular * (1 + rng.uniform(-0.15, 0.15, size=spec.dimension))
        starts.append(np.clip(perturbed, spec.lower, spec.upper))

    best = None
    for index, start in enumerate(starts):
        result = _run_nelder_mead(spec, start)
        diameter = _simplex_diameter(result.final_simplex[0])
        converged = bool(result.success) and result.fun < spec.penalty and diameter < 1e-8
        if not converged:
            logger.warning("❌ Start %d did not converge (value %.6g, simplex %.2e)", index, result.fun, diameter)
            continue
        if best is None or result.fun < best.fun:
            best = result

    if best is None:
        raise OptimizationFailedError(f"No Nelder-Mead start converged for {spec.sequence} (k = {spec.k})")
    sides = polygon_from_sides(spec.k, best.x).side_lengths
    distance = float(np.max(np.abs(np.asarray(sides) - regular_side_length(spec.k))))
    logger.info("✅ Minimum %.12g found %.2e from the regular polygon", best.fun, distance)
    return MinimizationResult(
        argmin=tuple(float(x) for x in best.x),
        value=float(best.fun),
        iterations=int(best.nit),
        converged=True,
        distance_to_regular=distance,
        sides=tuple(sides),
        starts=len(starts),
    )


@dataclass(frozen=True)
class LocalMinimality:
    is_local_minimum: bool
    base_value: float
    increases: Tuple[float, ...]


def local_minimality(spec: ObjectiveSpec, argmin: Sequence[float], step: float = 1e-3) -> LocalMinimality:
    """Objective change for each of the 2(2k-3) coordinate moves of size ``step``."""
    argmin = np.asarray(argmin, dtype=float)
    base = avg_length_objective(spec, argmin)
    increases = []
    for i in range(spec.dimension):
        for sign in (1, -1):
            moved = argmin.copy()
            moved[i] += sign * step
            increases.append(avg_length_objective(spec, moved) - base)
    return LocalMinimality(all(d > 0 for d in increases), base, tuple(increases))


@dataclass(frozen=True)
class UnimodalityReport:
    lines: int
    unimodal_lines: int

    @property
    def all_unimodal(self) -> bool:
        return self.lines == self.unimodal_lines


def _local_minima(values: np.ndarray) -> int:
    count = 0
    for i, v in enumerate(values):
        left = values[i - 1] if i > 0 else math.inf
        right = values[i + 1] if i + 1 < len(values) else math.inf
        if v <= left and v <= right:
            count += 1
    return count


def unimodality_diagnostic(spec: ObjectiveSpec, argmin: Sequence[float], lines: int = 20, samples: int = 41,
                           radius: float = 0.1, seed: Optional[int] = None) -> UnimodalityReport:
    """Sample the objective along random lines through ``argmin`` and count single-minimum lines."""
    rng = np.random.default_rng(tolerances().default_seed if seed is None else seed)
    argmin = np.asarray(argmin, dtype=float)
    offsets = np.linspace(-radius, radius, samples)
    unimodal = 0
    for _ in range(lines):
        direction = rng.normal(size=spec.dimension)
        direction /= np.linalg.norm(direction)
        values = np.array([avg_length_objective(spec, argmin + t * direction) for t in offsets])
        if _local_minima(values) == 1:
            unimodal += 1
    return UnimodalityReport(lines, unimodal)


def regular_lambert_parameter(k: int) -> float:
    return math.asinh(math.sqrt(math.cos(math.pi / k)))


def lambert_objective(k: int, a: BilliardSequence, t: float) -> float:
    """Average length of the reflective pair of ``a`` on the Lambert quadrilateral with parameter ``t``."""
    return reflective_pair(lambert_quad(k, t), a).average


def _valid_run(grid: np.ndarray, values: List[Optional[float]]) -> Tuple[int, int]:
    """Index range of the contiguous valid stretch around the best grid value."""
    valid = [i for i, v in enumerate(values) if v is not None]
    if not valid:
        raise OptimizationFailedError("Sequence is invalid on every sampled Lambert quadrilateral")
    best = min(valid, key=lambda i: values[i])
    lo = hi = best
    while lo > 0 and values[lo - 1] is not None:
        lo -= 1
    while hi + 1 < len(grid) and values[hi + 1] is not None:
        hi += 1
    return lo, hi


def minimize_lambert(k: int, a: BilliardSequence, t_range: Optional[Tuple[float, float]] = None,
                     grid_points: int = 41) -> MinimizationResult:
    regular = regular_lambert_parameter(k)
    lo, hi = t_range if t_range is not None else (0.25 * regular, 2.5 * regular)
    if not 0 < lo < hi:
        raise DomainError(f"Invalid parameter range ({lo}, {hi})")

    def objective(t: float) -> Optional[float]:
        try:
            return lambert_objective(k, a, t)
        except (BilliardsError, ValueError) as e:
            logger.debug("Sequence %s invalid at t = %.6g: %s", a, t, e)
            return None

    grid = np.linspace(lo, hi, grid_points)
    values = [objective(t) for t in grid]
    first, last = _valid_run(grid, values)
    if first > 0 or last < grid_points - 1:
        logger.warning("❌ Valid range for %s shrunk to [%.6g, %.6g]", a, grid[first], grid[last])
    best = min(range(first, last + 1), key=lambda i: values[i])
    if best in (first, last):
        raise OptimizationFailedError(
            f"Minimum of the pair average sits at the edge of the valid range ({grid[best]:.6g})"
        )

    penalty = tolerances().penalty

    def safe(t: float) -> float:
        value = objective(t)
        return penalty if value is None else value

    result = minimize_scalar(safe, bracket=(grid[best - 1], grid[best], grid[best + 1]), method='golden',
                             options={'xtol': 1e-10})
    if not result.success or result.fun >= penalty:
        raise OptimizationFailedError(f"Golden-section search failed for {a}")
    t_star = float(result.x)
    logger.info("✅ Lambert minimum at t = %.12g (regular %.12g)", t_star, regular)
    return MinimizationResult(
        argmin=(t_star,),
        value=float(result.fun),
        iterations=int(result.nit),
        converged=True,
        distance_to_regular=abs(t_star - regular),
        sides=tuple(lambert_quad(k, t_star).side_lengths),
    )
