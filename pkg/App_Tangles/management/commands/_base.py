import logging
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from App_Tangles import services
from App_Tangles.connectivity import verify_axioms
from App_Tangles.exceptions import ParseError, SizeGuardError, TanglesError
from App_Tangles.instances import FUNCTIONS

logger = logging.getLogger(__name__)

VERIFICATION_FAILED = 2
PARSE_FAILED = 3
GUARD_REFUSED = 4


class TanglesCommand(BaseCommand):
    """
    Common flags of every tangles command. Subclasses implement `run` and
    return the text to print; library errors become exit codes.

    Before `run`, the instance is checked to be a connectivity function:
    exhaustively up to --max-exhaustive elements, sampled with --seed above.
    """
    check_axioms = True

    def add_arguments(self, parser):
        parser.add_argument('instance', help="instance file ('graph n m' or 'matrix rows cols')")
        parser.add_argument('--fn', choices=FUNCTIONS, default=None,
                            help="connectivity function (default: edge-boundary for graphs, matroid for matrices)")
        parser.add_argument('--seed', type=int, default=None, help="seed of the sampled axiom check and of random trials")
        parser.add_argument('--stats', action='store_true', help="print the number of oracle calls")
        parser.add_argument('--max-exhaustive', type=int, default=None,
                            help="largest ground set checked exhaustively against the axioms")
        parser.add_argument('--engine', choices=['closure', 'mu'], default=None)
        parser.add_argument('--cache', action='store_true', help="reuse and store tangle data structures")
        parser.add_argument('--output', default=None, help="write the JSON document to this file")

    def handle(self, *args, **options):
        self.loaded = None
        try:
            text = Path(options['instance']).read_text()
        except OSError as e:
            raise CommandError(f"cannot read {options['instance']}: {e}")
        try:
            self.loaded = services.load_instance(text, options['fn'])
            if self.check_axioms:
                self.require_axioms(self.loaded, options)
            out = self.run(self.loaded, **options)
        except ParseError as e:
            raise CommandError(f"{options['instance']}: {e}", returncode=PARSE_FAILED)
        except SizeGuardError as e:
            raise CommandError(f"refused: {e}", returncode=GUARD_REFUSED)
        except TanglesError as e:
            raise CommandError(str(e))
        finally:
            if options['stats'] and self.loaded is not None:
                self.stderr.write(f"oracle calls: {self.loaded.oracle.calls}")
        if options['output'] and out:
            Path(options['output']).write_text(out)
            logger.info(f"wrote {options['output']}")
            return None
        return out

    def require_axioms(self, loaded, options):
        report = verify_axioms(loaded.oracle, max_exhaustive=options['max_exhaustive'], seed=options['seed'])
        logger.debug(f"{report.mode} axiom check of {loaded.function}: {report.checked} checks")
        if not report.ok:
            raise CommandError(f"{loaded.function} is not a connectivity function: {report.axiom} fails at "
                               f"{list(report.witness)}", returncode=VERIFICATION_FAILED)

    def run(self, loaded, **options):
        raise NotImplementedError
