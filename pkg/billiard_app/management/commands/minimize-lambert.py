import math

from billiard_app.management.base import BilliardsCommand
from billiard_app.optimize import regular_lambert_parameter
from billiard_app.serializers import minimization_to_dict, num
from billiard_app.services import OptimizationService


class Command(BilliardsCommand):
    help = 'Minimise the reflective-pair average over Lambert quadrilaterals'
    config_fields = ('t_range',)

    def add_command_arguments(self, parser):
        parser.add_argument('--t-range', dest='t_range', help='Search interval lo,hi for the parameter')

    def run(self, config):
        found = OptimizationService().minimize_lambert(config.k, config.billiard_sequence, config.t_range)
        result = minimization_to_dict(found)
        t_star = found.argmin[0]
        result['regular_t'] = num(regular_lambert_parameter(config.k))
        result['sinh2_defect'] = num(math.sinh(t_star) ** 2 - math.cos(math.pi / config.k))
        return result
