from billiard_app.management.base import BilliardsCommand
from billiard_app.serializers import minimization_to_dict
from billiard_app.services import OptimizationService


class Command(BilliardsCommand):
    help = 'Minimise the family average length over right-angled 2k-gons'
    config_fields = ('starts',)

    def add_command_arguments(self, parser):
        parser.add_argument('--starts', type=int, help='Number of random starts besides the regular polygon')

    def run(self, config):
        result, check = OptimizationService().minimize(
            config.k, config.billiard_sequence, starts=config.starts, seed=config.seed
        )
        return minimization_to_dict(result, check)
