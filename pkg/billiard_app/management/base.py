"""Shared plumbing for the billiards management commands.

Every command validates its options into a ``RunConfig``, runs under the
requested tolerance, and writes one JSON document (to ``--json`` or stdout)
that ends with the echoed config. Computation errors exit 1 with an
``{"error": {...}}`` object; bad arguments exit 2.
"""

import logging
from pathlib import Path
from typing import Any, Dict, Iterable, Optional, Tuple

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from billiard_app.billiard import BilliardSequence, BilliardTrajectory
from billiard_app.conf import override_tolerances, tolerances
from billiard_app.exceptions import BilliardsError
from billiard_app.polygon import GreenDiagonals, Table
from billiard_app.rendering import render_svg
from billiard_app.serializers import dumps

logger = logging.getLogger(__name__)


def _split(value: Any) -> Any:
    if isinstance(value, str):
        return [part.strip() for part in value.split(',') if part.strip()]
    return value


class RunConfig(BaseModel):
    model_config = ConfigDict(extra='forbid', frozen=True)

    command: str
    mode: Optional[str] = None
    k: int = Field(3, ge=2)
    sequence: Optional[Tuple[int, ...]] = None
    sides: Optional[Tuple[float, ...]] = None
    t: Optional[float] = Field(None, gt=0)
    t_range: Optional[Tuple[float, float]] = None
    tol: Optional[float] = Field(None, gt=0)
    seed: int = Field(default_factory=lambda: tolerances().default_seed)
    starts: Optional[int] = Field(None, ge=0)
    orbit: bool = False
    green: bool = False
    json_path: Optional[str] = None
    svg_path: Optional[str] = None

    @field_validator('sequence', mode='before')
    @classmethod
    def parse_sequence(cls, value):
        if isinstance(value, str):
            return BilliardSequence.parse(value).entries
        return value

    @field_validator('sides', 't_range', mode='before')
    @classmethod
    def parse_numbers(cls, value):
        return _split(value)

    @field_validator('sides')
    @classmethod
    def positive_sides(cls, value):
        if value is not None and min(value) <= 0:
            raise ValueError("side lengths must be positive")
        return value

    @model_validator(mode='after')
    def check_range(self):
        if self.t_range is not None and not 0 < self.t_range[0] < self.t_range[1]:
            raise ValueError("t range must satisfy 0 < lo < hi")
        return self

    @property
    def billiard_sequence(self) -> BilliardSequence:
        if self.sequence is None:
            raise CommandError(f"{self.command} needs --sequence", returncode=2)
        return BilliardSequence(self.sequence)

    def echo(self) -> Dict:
        return self.model_dump(mode='json')


class BilliardsCommand(BaseCommand):
    """Base for commands that compute one JSON result."""

    requires_system_checks = []
    config_fields = ()

    def add_arguments(self, parser):
        parser.add_argument('--k', type=int, default=3, help='Half the number of polygon sides')
        parser.add_argument('--sequence', help='Billiard sequence, e.g. 1,4')
        parser.add_argument('--sides', help='Free side lengths s1,...,s_{2k-3}')
        parser.add_argument('--t', type=float, help='Lambert quadrilateral parameter')
        parser.add_argument('--tol', type=float, help='Geometric tolerance for validity checks')
        parser.add_argument('--seed', type=int, help='Seed for random starts')
        parser.add_argument('--json', dest='json_path', help='Write the result here instead of stdout')
        parser.add_argument('--svg', dest='svg_path', help='Also render an SVG picture here')
        self.add_command_arguments(parser)

    def add_command_arguments(self, parser):
        pass

    def run(self, config: RunConfig) -> Dict:
        raise NotImplementedError

    def build_config(self, options: Dict) -> RunConfig:
        fields = {'k', 'sequence', 'sides', 't', 'tol', 'seed', 'json_path', 'svg_path', *self.config_fields}
        values = {key: options.get(key) for key in fields if options.get(key) is not None}
        try:
            return RunConfig(command=self.command_name(), **values)
        except (ValidationError, ValueError) as e:
            raise CommandError(f"Invalid arguments: {e}", returncode=2) from e

    def command_name(self) -> str:
        return self.__module__.rsplit('.', 1)[-1]

    def handle(self, *args, **options):
        config = self.build_config(options)
        changes = {} if config.tol is None else {'geometric_tol': config.tol}
        try:
            with override_tolerances(**changes):
                result = self.run(config)
        except BilliardsError as e:
            logger.error("❌ %s failed: %s", config.command, e.message)
            self.emit({'error': e.as_dict(), 'config': config.echo()}, config, stream=self.stderr)
            raise CommandError(e.message, returncode=1) from e
        except ValueError as e:
            raise CommandError(str(e), returncode=2) from e
        self.emit({**result, 'config': config.echo()}, config)

    def emit(self, payload: Dict, config: RunConfig, stream=None) -> None:
        text = dumps(payload)
        if config.json_path:
            path = self.resolve(config.json_path)
            path.write_text(text, encoding='utf-8')
            logger.info("✅ Wrote %s", path)
        else:
            (stream or self.stdout).write(text, ending='')

    def write_svg(self, config: RunConfig, table: Table, trajectories: Iterable[BilliardTrajectory] = (),
                  green: Optional[GreenDiagonals] = None) -> Optional[str]:
        if not config.svg_path:
            return None
        path = self.resolve(config.svg_path)
        path.write_text(render_svg(table, trajectories, green, title=config.command), encoding='utf-8')
        logger.info("✅ Rendered %s", path)
        return str(path)

    @staticmethod
    def resolve(name: str) -> Path:
        path = Path(name)
        if not path.is_absolute():
            path = Path(settings.OUTPUT_DIR) / path
        path.parent.mkdir(parents=True, exist_ok=True)
        return path
