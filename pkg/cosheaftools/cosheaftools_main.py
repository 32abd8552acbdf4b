import logging
import shlex
import sys

from cosheaftools.core.cli import CommandLine
from cosheaftools.common.exceptions import InputError


def main(argv=None):
    """
    Run one cosheaftools command from the command line arguments and exit
    with its status. Without arguments the command summary is printed.
    """
    argv = sys.argv[1:] if argv is None else list(argv)
    shell = CommandLine()
    if not argv:
        shell.onecmd('help')
        status = InputError.exit_status
    else:
        shell.onecmd(' '.join(shlex.quote(arg) for arg in argv))
        status = shell.exit_status
    logging.shutdown()
    sys.exit(status)

if __name__ == '__main__':
    main()
