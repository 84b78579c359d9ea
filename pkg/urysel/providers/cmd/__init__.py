import os
import sys
import argparse

from urysel.core import Suite
from urysel.providers.base import BaseProvider, BaseWriter, Command


class CmdWriter(BaseWriter):
    def __init__(self, indent=2):
        super(CmdWriter, self).__init__(indent)

    def _write(self, text, file_output):
        """See base method for description.
        """
        if file_output is None:
            sys.stdout.write(text)
            sys.stdout.flush()
            return
        with open(file_output, 'w', encoding='utf-8', newline='\n') as fd:
            fd.write(text)


class CmdArgumentParser(object):
    def __init__(self, argv=None):
        self.argv = argv

    @staticmethod
    def _common():
        # global options, accepted before and after the subcommand
        common = argparse.ArgumentParser(add_help=False)
        common.add_argument(
            '--config',
            help='file with configuration',
            type=str,
            default=argparse.SUPPRESS
        )
        common.add_argument(
            '--seed',
            help='seed of the random generator',
            type=int,
            default=argparse.SUPPRESS
        )
        common.add_argument(
            '--precision',
            help='default precision p (error 2^-p)',
            type=int,
            default=argparse.SUPPRESS
        )
        return common

    def set_config(self, description):
        """Parse command line.

        :return: (command, config file, options dict)
        """
        common = self._common()
        parser = argparse.ArgumentParser(description=description,
                                         parents=[common])
        commands = parser.add_subparsers(dest='command', metavar='command')
        commands.required = True

        cmd = commands.add_parser(
            Command.build_urysohn, parents=[common],
            help='grow U0 by bookkeeping'
        )
        cmd.add_argument('--steps', type=int, help='bookkeeping steps')
        cmd.add_argument('--height', type=int, help='bookkeeping height cap')
        cmd.add_argument('--builder', help='builder JSON to continue')
        cmd.add_argument('--out', help='output JSON (default stdout)')

        cmd = commands.add_parser(
            Command.embed, parents=[common],
            help='embed an effective space into U'
        )
        cmd.add_argument('--space', required=True, help='space JSON')
        cmd.add_argument('--count', type=int, required=True,
                         help='number of dense points to embed')
        cmd.add_argument('--report', help='output JSON (default stdout)')

        cmd = commands.add_parser(
            Command.represent, parents=[common],
            help='least ideal stages of a point'
        )
        cmd.add_argument('--space', required=True, help='space JSON')
        cmd.add_argument('--point', required=True, help='point JSON')
        cmd.add_argument('--stage', type=int, required=True, help='stage k')
        cmd.add_argument('--eps', help='resolution p/q for the verdict')
        cmd.add_argument('--out', help='output JSON (default stdout)')

        cmd = commands.add_parser(
            Command.select, parents=[common],
            help='distribution mu_n of a point'
        )
        cmd.add_argument('--space', required=True, help='space JSON')
        cmd.add_argument('--point', required=True, help='point JSON')
        cmd.add_argument('--level', type=int, required=True, help='level n')
        cmd.add_argument('--out', help='output JSON (default stdout)')

        cmd = commands.add_parser(
            Command.harness, parents=[common],
            help='convergence of sampled selections'
        )
        cmd.add_argument('--space', help='space JSON (default real line)')
        cmd.add_argument('--target', default='1/3',
                         help='target rational x, x_n = x + 2^-n')
        cmd.add_argument('--levels', type=int, default=65,
                         help='number of levels')
        cmd.add_argument('--trials', type=int, default=50,
                         help='sampled trajectories')
        cmd.add_argument('--report', help='output JSON (default stdout)')

        cmd = commands.add_parser(
            Command.density, parents=[common],
            help='dense enumeration of a typed function space'
        )
        cmd.add_argument('--type', dest='type_expr', required=True,
                         help='type, e.g. "(V1->V1)"')
        cmd.add_argument('--base', action='append', default=[],
                         help='assignment V<i>=<kind>, repeatable')
        cmd.add_argument('--level', type=int, required=True, help='level n')
        cmd.add_argument('--count', type=int, default=10,
                         help='enumerated points')
        cmd.add_argument('--eval-grid', dest='eval_grid',
                         help='grid JSON to evaluate on')
        cmd.add_argument('--out', help='output JSON (default stdout)')

        cmd = commands.add_parser(
            Command.check, parents=[common],
            help='run an invariant suite'
        )
        cmd.add_argument('suite', choices=Suite.names())
        cmd.add_argument('--inject-fault', dest='inject_fault',
                         action='store_true', help='corrupt the suite input')
        cmd.add_argument('--report', help='output JSON (default stdout)')

        args = vars(parser.parse_args(self.argv))
        command = args.pop('command')
        config_file = args.pop('config', None)

        return command, config_file, args


class CmdProvider(BaseProvider):
    def __init__(self, argv=None):
        super(CmdProvider, self).__init__()

        cloader = CmdArgumentParser(argv)
        self.args.command, self.args.config_file, self.args.options = \
            cloader.set_config("Run urysel.")
        # load configuration
        if self.args.config_file is None and os.getenv("URYSEL_CONFIG_FILE"):
            self.args.config_file = os.getenv("URYSEL_CONFIG_FILE")

    def load(self):
        """See base method for description."""
        options = self.args.options
        self.config = self._load_config({
            'seed': options.get('seed'),
            'precision': options.get('precision'),
            'steps': options.get('steps'),
            'height': options.get('height'),
        })

        # define storage writter
        self.storage = CmdWriter(self.config.indent)

        return self.config
