from django.core.management.base import CommandError

from App_Tangles import services
from App_Tangles.export import json_text

from ._base import VERIFICATION_FAILED, TanglesCommand


class Command(TanglesCommand):
    help = "Axiom check, agreement with the brute-force oracles and canonicity trials."
    check_axioms = False

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--order', type=int, default=2)
        parser.add_argument('--trials', type=int, default=5)

    def run(self, loaded, **options):
        report = services.selfcheck(loaded, options['order'], options['trials'], options['seed'],
                                    max_exhaustive=options['max_exhaustive'], engine=options['engine'])
        if report['ok']:
            return json_text(report)
        self.stdout.write(json_text(report))
        raise CommandError("self check failed", returncode=VERIFICATION_FAILED)
