import argparse
import cmd
import logging
import shlex
import traceback
from functools import wraps

from cosheaftools.algebra import groups as ab
from cosheaftools.common import exceptions
from cosheaftools.common import utils
from cosheaftools.common import colourer as term
from cosheaftools.core import _version
from cosheaftools.core.cosheaf import hat_eval
from cosheaftools.core.crosscheck import crosscheck, crosscheck_poset
from cosheaftools.core.examples import kernel_counterexample
from cosheaftools.core.fuzz import run_corpus
from cosheaftools.core.pipelines import (
    bm_homology,
    bm_poset,
    cech_homology,
    minimal_cover,
    vertex_cover_cech,
)
from cosheaftools.core.precosheaf import (
    comparison_map,
    cosheafify,
    table_from_cosheaf,
)
from cosheaftools.core.resolution import default_depth, derived_homology
from cosheaftools.parsers.json_document import build_cosheaf, parse
from cosheaftools.parsers.options import Options
from cosheaftools.topology.poset import OpenSet

log = logging.getLogger(__name__)

EXAMPLES = ('paper-kernel',)


def wraps_do_commands(fn):
    """
    Run a do_* command, turning any exception into a JSON error record on
    the command's output stream and an exit status on the shell.
    """
    @wraps(fn)
    def wrapper(self, command):
        log.debug('USER COMMAND: (' + fn.__name__ + ') ' + command)
        self.exit_status = 0
        try:
            return fn(self, command)
        except exceptions.CosheafToolsException as e:
            log.error('Command failed: {0}'.format(e))
            self.report_error(e, e.exit_status)
        except Exception as e:
            log.error('Command failed due to error:')
            log.error(traceback.format_exc())
            self.report_error(e, exceptions.ContractViolation.exit_status)
    return wrapper


class CommandParser(argparse.ArgumentParser):
    """ArgumentParser that raises InputError instead of exiting."""

    def __init__(self, prog, **kwargs):
        kwargs.setdefault('add_help', False)
        super(CommandParser, self).__init__(prog=prog, **kwargs)

    def error(self, message):
        raise exceptions.InputError(
            '{0}: {1}'.format(self.prog, message)
        )

    def parse_command(self, command):
        try:
            argv = shlex.split(command)
        except ValueError as e:
            raise exceptions.InputError(
                '{0}: {1}'.format(self.prog, e)
            )
        return self.parse_args(argv)


def _file_parser(prog):
    parser = CommandParser(prog)
    parser.add_argument('file')
    return parser


SEP = ' ' * 4


class CommandLine(cmd.Cmd, object):
    """
    Batch front end. Each do_* command reads an input document, runs a
    pipeline and writes one JSON record to *stdout*; exit_status holds the
    outcome of the last command.
    """
    prompt = ''

    def __init__(self, options=None, stdout=None):
        super(CommandLine, self).__init__(stdout=stdout)
        self.options = options if options is not None else Options()
        self.exit_status = 0

    def emit(self, record):
        self.stdout.write(utils.dump_json(record) + '\n')

    def report_error(self, error, status):
        self.exit_status = status
        self.emit({
            'error': type(error).__name__,
            'message': str(error),
            'status': status,
        })

    def default(self, line):
        self.report_error(
            exceptions.InputError(
                'Unknown command: {0}'.format(line.split()[0])
            ),
            exceptions.InputError.exit_status
        )

    def emptyline(self):
        pass

    def load(self, path):
        document = parse(path)
        log.info('Loaded {0} from {1}'.format(document, path))
        return document, build_cosheaf(document)

    @wraps_do_commands
    def do_check(self, command):
        """Validate a document's cosheaf data: check <file>"""
        args = _file_parser('check').parse_command(command)
        document, F = self.load(args.file)
        self.emit({
            'check': 'ok',
            'kind': document.kind,
            'elements': len(document.poset),
            'covering_pairs': len(document.poset.hasse),
            'well_defined': True,
            'functorial': True,
        })

    @wraps_do_commands
    def do_bm(self, command):
        """Borel-Moore homology: bm <file>"""
        args = _file_parser('bm').parse_command(command)
        document, F = self.load(args.file)
        if document.is_complex:
            report = bm_homology(document.complex, F)
        else:
            report = bm_poset(document.poset, F)
        self.stdout.write(report.to_json() + '\n')

    @wraps_do_commands
    def do_cech(self, command):
        """
        Cech homology: cech <file>
        Complexes use the vertex star cover, posets the cover by principal
        open sets of minimal elements.
        """
        args = _file_parser('cech').parse_command(command)
        document, F = self.load(args.file)
        if document.is_complex:
            report = vertex_cover_cech(document.complex, F)
        else:
            report = cech_homology(F, minimal_cover(document.poset))
        self.stdout.write(report.to_json() + '\n')

    @wraps_do_commands
    def do_derived(self, command):
        """Derived colimit homology: derived <file> [--max-degree N]"""
        parser = _file_parser('derived')
        parser.add_argument('--max-degree', type=int, default=None)
        args = parser.parse_command(command)
        if args.max_degree is not None and args.max_degree < 0:
            raise exceptions.InputError('--max-degree must be nonnegative')
        document, F = self.load(args.file)
        if args.max_degree is None:
            depth = default_depth(F, self.options.get_extra_depth())
        else:
            depth = args.max_degree + 1
        report = derived_homology(F, depth)
        self.stdout.write(report.to_json() + '\n')

    @wraps_do_commands
    def do_crosscheck(self, command):
        """Compare every homology pipeline: crosscheck <file> [--parallel]"""
        parser = _file_parser('crosscheck')
        parser.add_argument('--parallel', action='store_true')
        args = parser.parse_command(command)
        parallel = args.parallel or self.options.get_parallel()
        extra_depth = self.options.get_extra_depth()
        document, F = self.load(args.file)
        if document.is_complex:
            verdict = crosscheck(
                document.complex, F, parallel, extra_depth
            )
        else:
            verdict = crosscheck_poset(F, parallel, extra_depth)
        self.emit(verdict.to_record())
        if not verdict.agree:
            self.exit_status = exceptions.VerificationMismatch.exit_status

    @wraps_do_commands
    def do_cosheafify(self, command):
        """
        Value of the cosheafification on an open set:
        cosheafify <file> --open <members...>
        """
        parser = _file_parser('cosheafify')
        parser.add_argument('--open', nargs='+', required=True)
        args = parser.parse_command(command)
        members = [m for item in args.open for m in utils.split_members(item)]
        document, F = self.load(args.file)
        U = OpenSet.from_members(document.poset, members)
        table = table_from_cosheaf(F, cap=self.options.get_open_cap())
        plus = cosheafify(table)
        rho = comparison_map(table, U, plus)
        self.emit({
            'open': sorted(U.members),
            'cosheafified': ab.iso_class(hat_eval(plus, U)).to_record(),
            'table_value': ab.iso_class(table.value(U)).to_record(),
            'comparison_is_isomorphism': ab.is_isomorphism(rho),
        })

    @wraps_do_commands
    def do_example(self, command):
        """Replay a built-in example: example paper-kernel"""
        parser = CommandParser('example')
        parser.add_argument('name', choices=EXAMPLES)
        parser.parse_command(command)
        self.stdout.write(kernel_counterexample().to_json() + '\n')

    @wraps_do_commands
    def do_fuzz(self, command):
        """
        Cross-check a seeded corpus of random complexes and cosheaves:
        fuzz [--seed S] [--count K] [--parallel]
        """
        settings = self.options.get_fuzz_settings()
        parser = CommandParser('fuzz')
        parser.add_argument('--seed', type=int, default=settings['seed'])
        parser.add_argument('--count', type=int, default=settings['count'])
        parser.add_argument('--parallel', action='store_true')
        args = parser.parse_command(command)
        if args.count < 0:
            raise exceptions.InputError('--count must be nonnegative')
        summary = run_corpus(
            args.seed,
            args.count,
            settings['max_vertices'],
            settings['max_dimension'],
            settings['max_rank'],
            parallel=args.parallel or self.options.get_parallel(),
        )
        self.emit(summary.to_record())
        if not summary.ok:
            self.exit_status = exceptions.VerificationMismatch.exit_status

    def do_show_config(self, command):
        """Print out the configuration settings"""
        msg = (
            '\n' +
            term.colourise('CosheafTools ', fn='bold') +
            '(version: ' + term.colourise(_version.__version__, fg='teal') +
            ')\n' +
            term.darkgray(
                SEP + 'Options file: ' + self.options.getOptionsPath()
            ) + '\n'
        )
        for section, values in self.options.as_dict().items():
            msg += term.yellow(SEP + '[' + section + ']') + '\n'
            for key, value in values.items():
                if self.options.is_valid(section, key, value):
                    shown = term.green('{1}')
                else:
                    shown = '(invalid) ' + term.red('{1}')
                msg += (SEP * 2 + '{0:<15}: ' + shown + '\n').format(
                    key, value
                )
        self.stdout.write(msg + '\n')
        self.exit_status = 0
