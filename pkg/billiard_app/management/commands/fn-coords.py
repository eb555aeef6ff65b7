from billiard_app.management.base import BilliardsCommand
from billiard_app.serializers import fn_to_dict
from billiard_app.services import SurfaceService, TableService


class Command(BilliardsCommand):
    help = 'Pants-curve lengths and twists of the surface glued from a right-angled polygon'

    def run(self, config):
        polygon = TableService().right_angled(config.k, config.sides)
        coords, in_space = SurfaceService().coordinates(polygon)
        return fn_to_dict(coords, in_space)
