"""
`python -m App_Tangles.cli <command> ...` runs one of the tangles
management commands without going through manage.py and returns its exit
code: 0 success, 1 other failures, 2 verification failure, 3 parse error,
4 size guard.
"""

import os
import sys
from typing import Optional, Sequence, TextIO

COMMANDS = ('tangles', 'branchwidth', 'decompose', 'directed', 'verify', 'selfcheck')


def run(argv: Optional[Sequence[str]] = None, stdout: Optional[TextIO] = None,
        stderr: Optional[TextIO] = None) -> int:
    import django
    from django.core.management import call_command
    from django.core.management.base import CommandError

    argv = list(sys.argv[1:] if argv is None else argv)
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    if not argv or argv[0] not in COMMANDS:
        stderr.write(f"usage: tangles {{{','.join(COMMANDS)}}} [options] instance\n")
        return 1
    os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'App.settings')
    django.setup()
    try:
        call_command(argv[0], *argv[1:], stdout=stdout, stderr=stderr)
    except CommandError as e:
        stderr.write(f"error: {e}\n")
        return e.returncode
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == '__main__':
    main()
