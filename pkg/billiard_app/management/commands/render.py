from django.core.management.base import CommandError

from billiard_app.management.base import BilliardsCommand
from billiard_app.polygon import RightAngledPolygon
from billiard_app.serializers import table_to_dict
from billiard_app.services import TableService, TrajectoryService


class Command(BilliardsCommand):
    help = 'Draw a table, optionally with green diagonals and trajectories, as SVG'
    config_fields = ('green', 'orbit')

    def add_command_arguments(self, parser):
        parser.add_argument('--green', action='store_true', help='Draw the green diagonals')
        parser.add_argument('--orbit', action='store_true', help='Draw every label rotation of --sequence')

    def run(self, config):
        if not config.svg_path:
            raise CommandError('render needs --svg', returncode=2)
        tables = TableService()
        table = tables.for_run(config.k, config.sides, config.t)
        green = None
        if config.green and isinstance(table, RightAngledPolygon):
            green = tables.green(table)
        members = []
        if config.sequence is not None:
            trajectories = TrajectoryService()
            if config.orbit:
                members = trajectories.family(table, config.billiard_sequence).members
            else:
                members = [trajectories.trajectory(table, config.billiard_sequence)]
        return {
            'svg': self.write_svg(config, table, members, green),
            'table': table_to_dict(table),
            'trajectories': len(members),
            'green_diagonals': 0 if green is None else len(green),
        }
