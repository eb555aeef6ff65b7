from billiard_app.management.base import BilliardsCommand
from billiard_app.serializers import family_to_dict
from billiard_app.services import TableService, TrajectoryService


class Command(BilliardsCommand):
    help = 'Cyclic rotation family of a billiard sequence and its average length'

    def run(self, config):
        table = TableService().for_run(config.k, config.sides, config.t)
        family = TrajectoryService().family(table, config.billiard_sequence)
        result = family_to_dict(family)
        svg = self.write_svg(config, table, family.members)
        if svg:
            result['svg'] = svg
        return result
