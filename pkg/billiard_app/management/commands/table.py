from billiard_app.management.base import BilliardsCommand
from billiard_app.serializers import layout_to_dict, table_to_dict
from billiard_app.services import TABLE_MODES, TableService


class Command(BilliardsCommand):
    help = 'Build a billiard table and write it as JSON'
    config_fields = ('mode',)

    def add_command_arguments(self, parser):
        parser.add_argument('mode', choices=TABLE_MODES)

    def run(self, config):
        table, layout = TableService().build(config.mode, config.k, sides=config.sides, t=config.t)
        result = table_to_dict(table)
        if config.mode == 'regular':
            result['side_length'] = result['side_lengths'][0]
        if layout is not None:
            result['layout'] = layout_to_dict(layout)
        svg = self.write_svg(config, table)
        if svg:
            result['svg'] = svg
        return result
