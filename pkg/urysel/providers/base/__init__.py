import os
import sys
import logging
from configparser import ConfigParser, NoSectionError, NoOptionError
from abc import abstractmethod

from urysel.exceptions import ConfigError, WrongParameterValue
from urysel.io_functions.reports import dumps
from urysel.providers import Logger


class Args:
    # subcommand to run (Command)
    command = None
    # config file
    config_file = None
    # subcommand options (argparse namespace as dict)
    options = None


class Command:
    # subcommands
    build_urysohn = 'build-urysohn'
    embed = 'embed'
    represent = 'represent'
    select = 'select'
    harness = 'harness'
    density = 'density'
    check = 'check'

    @classmethod
    def names(cls):
        return (cls.build_urysohn, cls.embed, cls.represent, cls.select,
                cls.harness, cls.density, cls.check)

    @classmethod
    def __getitem__(cls, key):
        if key not in cls.names():
            raise ConfigError('Unknown command: {}'.format(key))
        return key


class RunConfig(object):
    """Settings of one run, merged from defaults, config file and flags.

    :param int seed: seed of the single random generator
    :param int precision: default precision p (>= 1)
    :param int steps: bookkeeping steps (>= 0)
    :param int height: bookkeeping height cap (>= 1)
    :param str outdir: directory for relative output paths
    :param int indent: JSON indentation
    """
    def __init__(self, seed=0, precision=16, steps=100, height=4,
                 outdir=None, indent=2, log_level='INFO'):
        self.seed = int(seed)
        self.precision = int(precision)
        self.steps = int(steps)
        self.height = int(height)
        self.outdir = outdir or None
        self.indent = int(indent)
        self.log_level = log_level
        self.validate()

    def validate(self):
        if self.precision < 1:
            raise WrongParameterValue('precision', self.precision)
        if self.steps < 0:
            raise WrongParameterValue('steps', self.steps)
        if self.height < 1:
            raise WrongParameterValue('height', self.height)
        if self.indent < 0:
            raise WrongParameterValue('indent', self.indent)

    def as_dict(self):
        return {
            'seed': self.seed,
            'precision': self.precision,
            'steps': self.steps,
            'height': self.height,
        }

    def output_path(self, path):
        if path is None or path == '-':
            return None
        if self.outdir and not os.path.isabs(path):
            return os.path.join(self.outdir, path)
        return path


class BaseWriter(object):
    def __init__(self, indent=2):
        self.indent = indent

    @staticmethod
    def _print_report_stats(report, text, file_output):
        """Print report stats."""
        Logger.info("JSON report <{}> saved".format(
            file_output or 'stdout'
        ))
        if isinstance(report, dict):
            Logger.info("\tReport stats: keys={} bytes={}".format(
                len(report), len(text.encode('utf-8'))
            ))

    def write_report(self, report, file_output=None):
        """Serialize report and write it.

        :param report: JSON-compatible structure (rationals allowed)
        :param file_output: target path, None for stdout
        """
        text = dumps(report, self.indent)
        if file_output:
            dir_name = os.path.dirname(file_output)
            if dir_name and not os.path.exists(dir_name):
                os.makedirs(dir_name)

        self._write(text, file_output)
        self._print_report_stats(report, text, file_output)

        return text

    @abstractmethod
    def _write(self, text, file_output):
        """Write report text.

        :param text: serialized report
        :param file_output: path to output file, None for stdout
        """
        pass


class BaseProvider(object):
    def __init__(self):
        self.args = Args()

        # logo goes to stderr, stdout carries reports
        self._print_logo_fn = lambda text: print(text, file=sys.stderr)

        # default logging level (can be modified by provider)
        Logger.setLevel(logging.INFO)

        # storage writter must be defined
        self.storage = None
        self.config = None

    @property
    def command(self):
        return self.args.command

    @staticmethod
    def add_logging_handler(handler, formatter=None):
        """Register new logging handler.

        :param handler: logging handler to be registered
        :param formatter: logging handler formatting
        """
        if not formatter:
            formatter = logging.Formatter(
                "%(asctime)s - %(name)s - %(levelname)s - %(message)s - "
                "[%(module)s:%(lineno)s]"
            )
        handler.setFormatter(formatter)
        if len(Logger.handlers) == 0:
            # avoid duplicated handlers (eg. repeated runs in one process)
            Logger.addHandler(handler)

    @staticmethod
    def _defaults_path():
        return os.path.join(os.path.dirname(__file__), 'defaults.ini')

    def _read_config(self):
        config = ConfigParser()
        defaults = self._defaults_path()
        if not os.path.exists(defaults):
            raise ConfigError("{} does not exist".format(defaults))
        config.read(defaults)

        if self.args.config_file:
            if not os.path.exists(self.args.config_file):
                raise ConfigError("{} does not exist".format(
                    self.args.config_file
                ))
            config.read(self.args.config_file)

        return config

    def _load_config(self, overrides=None):
        """Merge package defaults, config file and command line flags.

        :param dict overrides: flag values (None means not given)
        :return RunConfig: validated configuration
        """
        config = self._read_config()
        overrides = {k: v for k, v in (overrides or {}).items()
                     if v is not None}

        try:
            values = {
                'seed': config.getint('run', 'seed'),
                'precision': config.getint('run', 'precision'),
                'steps': config.getint('bookkeeping', 'steps'),
                'height': config.getint('bookkeeping', 'height'),
                'outdir': config.get('output', 'outdir', fallback=None),
                'indent': config.getint('output', 'indent', fallback=2),
                'log_level': config.get('logging', 'level',
                                        fallback='INFO'),
            }
        except (NoSectionError, NoOptionError) as e:
            raise ConfigError('Config file {}: {}'.format(
                self.args.config_file, e
            ))
        except ValueError as e:
            raise ConfigError('Config file {}: {}'.format(
                self.args.config_file, e
            ))
        values.update(overrides)

        # set logging level
        try:
            Logger.setLevel(values['log_level'])
        except ValueError as e:
            raise ConfigError('{}'.format(e))
        # sys.stderr logging
        self.add_logging_handler(
            logging.StreamHandler(stream=sys.stderr)
        )

        return RunConfig(**values)

    def load(self):
        """Load run configuration."""
        raise NotImplementedError()

    def logo(self):
        """Print urysel ascii-style logo."""
        logo_file = os.path.join(os.path.dirname(__file__), 'txtlogo.txt')
        with open(logo_file, 'r') as fd:
            self._print_logo_fn(fd.read())
        self._print_logo_fn('')  # extra line
