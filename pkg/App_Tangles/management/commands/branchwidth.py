from django.core.management.base import CommandError

from App_Tangles import services

from ._base import VERIFICATION_FAILED, TanglesCommand


class Command(TanglesCommand):
    help = "Print the largest tangle order, which is the branch width."

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--brute', action='store_true', help="cross-check against every branch decomposition")

    def run(self, loaded, **options):
        result = services.branch_width(loaded, brute=options['brute'], engine=options['engine'])
        if result['brute'] is None:
            return f"{result['width']}\n"
        self.stdout.write(f"{result['width']}\nbrute force: {result['brute']}")
        if result['brute'] != result['width']:
            raise CommandError("largest tangle order and brute-force branch width differ",
                               returncode=VERIFICATION_FAILED)
        return None
