import json
from pathlib import Path

from django.core.management.base import CommandError

from App_Tangles import services
from App_Tangles.exceptions import ParseError
from App_Tangles.export import json_text

from ._base import VERIFICATION_FAILED, TanglesCommand


class Command(TanglesCommand):
    help = "Check a decomposition document against the tangle decomposition conditions."

    def add_arguments(self, parser):
        parser.add_argument('decomposition', help="JSON document written by decompose or directed")
        super().add_arguments(parser)

    def run(self, loaded, **options):
        try:
            doc = json.loads(Path(options['decomposition']).read_text())
        except json.JSONDecodeError as e:
            raise ParseError(f"{options['decomposition']}: {e.msg}", e.lineno)
        except OSError as e:
            raise CommandError(f"cannot read {options['decomposition']}: {e}")
        report = services.verify(loaded, doc, engine=options['engine'], cache=options['cache'])
        if report['ok']:
            return json_text(report)
        self.stdout.write(json_text(report))
        raise CommandError(f"{len(report['violations'])} violations", returncode=VERIFICATION_FAILED)
