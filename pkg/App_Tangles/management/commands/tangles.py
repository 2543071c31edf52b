from App_Tangles import services
from App_Tangles.export import json_text

from ._base import TanglesCommand


class Command(TanglesCommand):
    help = "Count the tangles of every order up to --order and list their signatures."

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--order', type=int, required=True)

    def run(self, loaded, **options):
        ds = services.structure(loaded, options['order'], options['engine'], cache=options['cache'])
        return json_text(services.census(ds))
