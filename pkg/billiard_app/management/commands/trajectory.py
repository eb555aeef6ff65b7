from billiard_app.management.base import BilliardsCommand
from billiard_app.serializers import trajectory_to_dict
from billiard_app.services import TableService, TrajectoryService


class Command(BilliardsCommand):
    help = 'Closed trajectory of a billiard sequence'

    def run(self, config):
        table = TableService().for_run(config.k, config.sides, config.t)
        traj = TrajectoryService().trajectory(table, config.billiard_sequence)
        result = trajectory_to_dict(traj)
        svg = self.write_svg(config, table, [traj])
        if svg:
            result['svg'] = svg
        return result
