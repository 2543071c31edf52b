from pathlib import Path

from App_Tangles import services
from App_Tangles.export import decomposition_to_dot, decomposition_to_json, json_text

from ._base import TanglesCommand


class Command(TanglesCommand):
    help = "Canonical tree decomposition displaying every maximal tangle of order <= --order."

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--order', type=int, required=True)
        parser.add_argument('--refined', action='store_true',
                            help="refine until each node sees a single maximal tangle")
        parser.add_argument('--prune', action='store_true',
                            help="merge empty-bag nodes into a neighbour (not canonical)")
        parser.add_argument('--dot', default=None, help="also write a DOT drawing to this file")

    def run(self, loaded, **options):
        td = services.decompose(loaded, options['order'], refined=options['refined'], prune=options['prune'],
                                engine=options['engine'], cache=options['cache'])
        if options['dot']:
            Path(options['dot']).write_text(decomposition_to_dot(td))
        return json_text(decomposition_to_json(td))
