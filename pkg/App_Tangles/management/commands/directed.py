from pathlib import Path

from App_Tangles import services
from App_Tangles.export import directed_to_dot, directed_to_json, json_text

from ._base import TanglesCommand


class Command(TanglesCommand):
    help = "Directed tree decomposition rooted at the tangle with index --root-index."

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--order', type=int, required=True)
        parser.add_argument('--root-index', type=int, required=True)
        parser.add_argument('--dot', default=None)

    def run(self, loaded, **options):
        dtd = services.directed(loaded, options['order'], options['root_index'], engine=options['engine'],
                                cache=options['cache'])
        if options['dot']:
            Path(options['dot']).write_text(directed_to_dot(dtd))
        return json_text(directed_to_json(dtd))
