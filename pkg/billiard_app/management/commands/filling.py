from billiard_app.management.base import BilliardsCommand
from billiard_app.serializers import filling_to_dict
from billiard_app.services import FillingService, TableService, TrajectoryService


class Command(BilliardsCommand):
    help = 'Check whether a trajectory (or its rotation orbit) fills the table'
    config_fields = ('orbit',)

    def add_command_arguments(self, parser):
        parser.add_argument('--orbit', action='store_true', help='Use every label rotation of the sequence')

    def run(self, config):
        table = TableService().for_run(config.k, config.sides, config.t)
        sequence = config.billiard_sequence
        result = filling_to_dict(FillingService().check(table, sequence, orbit=config.orbit))
        if config.svg_path:
            trajectories = TrajectoryService()
            members = (
                trajectories.family(table, sequence).members if config.orbit
                else [trajectories.trajectory(table, sequence)]
            )
            result['svg'] = self.write_svg(config, table, members)
        return result
