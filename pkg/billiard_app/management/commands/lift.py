from billiard_app.management.base import BilliardsCommand
from billiard_app.polygon import lambert_quad
from billiard_app.serializers import glued_lift_to_dict, lift_to_dict
from billiard_app.services import SurfaceService, TableService


class Command(BilliardsCommand):
    help = 'Lift a trajectory to the glued surface (or, with --t, from a Lambert table to its glued polygon)'

    def run(self, config):
        surface = SurfaceService()
        sequence = config.billiard_sequence
        if config.t is not None:
            lift, check = surface.glued_lift(lambert_quad(config.k, config.t), sequence)
            return glued_lift_to_dict(lift, check)
        polygon = TableService().right_angled(config.k, config.sides)
        count, mismatch = surface.lift(polygon, sequence)
        result = lift_to_dict(count)
        result['geometry_check'] = mismatch or 'agrees'
        return result
