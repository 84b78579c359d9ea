"""Subcommands of urysel.

The provider prepares the run configuration and the parsed options
before this module is used. Every command builds one JSON report; the
exit code is 0 on success and 1 when a verification in the report fails.
"""

import itertools

import numpy as np

from urysel.core.domain import (
    IdealApprox, ideal_represents, least_ideal_clusters, least_ideal_stream,
    refuting_ball
)
from urysel.core.effective import (
    RealLine, UrysohnSpace, builtin_space, embed_into_U, verify_isometry
)
from urysel.core.metric import validate_metric
from urysel.core.numeric import rat, two_pow
from urysel.core.urysohn import UrysohnBuilder
from urysel.exceptions import UnsupportedType
from urysel.io_functions.reports import (
    builder_from_json, builder_to_json, clusters_to_json, grid_from_json,
    load_json, point_from_json, space_from_json
)
from urysel.processes.lift import enumerate_dense, interpret_type
from urysel.processes.selection import (
    convergence_harness, metric_selection_level
)
from urysel.processes.types import Arrow, Base, Product
from urysel.providers import Logger
from urysel.providers.base import Command
from urysel.suites import run_suite


class CommandRunner(object):
    """Run one subcommand on a loaded provider.

    :param provider: provider with ``config``, ``storage`` and parsed args
    """
    def __init__(self, provider):
        self.provider = provider
        self.config = provider.config
        self.options = provider.args.options or {}
        # single generator of the run
        self.rng = np.random.default_rng(self.config.seed)
        self.report = None
        self.exit_code = 0
        self._builder = None

        self._handlers = {
            Command.build_urysohn: self.build_urysohn,
            Command.embed: self.embed,
            Command.represent: self.represent,
            Command.select: self.select,
            Command.harness: self.harness,
            Command.density: self.density,
            Command.check: self.check,
        }

    def run(self):
        command = Command()[self.provider.command]
        Logger.info("Running {}".format(command))
        self.report, self.exit_code = self._handlers[command]()
        if isinstance(self.report, dict):
            self.report.setdefault('command', command)
            self.report.setdefault('config', self.config.as_dict())

        return self.exit_code

    def save_output(self):
        """Write the report to the requested file or stdout."""
        target = self.options.get('out') or self.options.get('report')
        return self.provider.storage.write_report(
            self.report, self.config.output_path(target)
        )

    def _option(self, name, default=None):
        value = self.options.get(name)
        return default if value is None else value

    def _builder_for_run(self):
        """Urysohn builder grown by the configured bookkeeping steps."""
        if self._builder is None:
            self._builder = UrysohnBuilder(height_cap=self.config.height)
            self._builder.run_bookkeeping(self.config.steps)
        return self._builder

    def _space(self, required=True):
        path = self._option('space')
        if path is None:
            if required:
                raise UnsupportedType("--space is required")
            return RealLine()
        data = load_json(path)
        builder = None
        if data.get('kind') == UrysohnSpace.kind and \
                'builder' not in data.get('params', {}):
            builder = self._builder_for_run()
        return space_from_json(data, builder)

    def _point(self, space):
        data = load_json(self.options['point'])
        return point_from_json(data, space)

    def build_urysohn(self):
        if self._option('builder'):
            builder = builder_from_json(load_json(self.options['builder']))
            if builder.cursor.cap is None:
                builder.cursor.cap = self.config.height
        else:
            builder = UrysohnBuilder(height_cap=self.config.height)
        before = builder.size
        builder.run_bookkeeping(self.config.steps)
        violations = validate_metric(builder.space)
        Logger.info("U0 grew from {} to {} points".format(
            before, builder.size
        ))

        report = builder_to_json(builder)
        report['points'] = builder.size
        report['valid'] = not violations
        report['violations'] = violations

        return report, 0 if not violations else 1

    def embed(self):
        space = self._space()
        count = int(self.options['count'])
        builder = UrysohnBuilder(height_cap=self.config.height)
        embedding = embed_into_U(space, builder, count)
        pairs = list(itertools.combinations_with_replacement(range(count), 2))
        report = verify_isometry(embedding, pairs, self.config.precision)
        report['space'] = space.kind
        report['images'] = [
            embedding.image(i).approx(self.config.precision)
            for i in range(count)
        ]
        report['u0'] = builder.space

        return report, 0 if report['ok'] else 1

    def represent(self):
        space = self._space()
        x = self._point(space)
        stage = int(self.options['stage'])
        stream = least_ideal_stream(space, x)
        chain = IdealApprox(tuple(stream(n) for n in range(stage + 1)))
        report = {
            'stage': stage,
            'clusters': clusters_to_json(
                least_ideal_clusters(space, x, stage)
            ),
            'stream': chain,
        }
        if self._option('eps') is not None:
            p = self.config.precision
            report['eps'] = rat(self.options['eps'])
            report['represents'] = ideal_represents(
                space, chain, x, report['eps'], p
            )
            report['refuting_ball'] = refuting_ball(space, chain, x, p)

        return report, 0

    def select(self):
        space = self._space()
        x = self._point(space)
        level = metric_selection_level(space, int(self.options['level']))
        dist = level.mu(x)

        return {
            'level': level.n,
            'delta': level.delta,
            'elements': [level.nu(a) for a in level.A],
            'dist': dist,
            'support': dist.support(),
        }, 0

    def harness(self):
        space = self._space(required=False)
        target = rat(self._option('target', '1/3'))
        levels = [metric_selection_level(space, n)
                  for n in range(int(self._option('levels', 65)))]
        x = space.point(target)
        report = convergence_harness(
            levels, x, lambda n: space.point(target + two_pow(n)),
            int(self._option('trials', 50)), self.rng
        )
        report['target'] = target

        return report, 0 if report['ok'] else 1

    def _bases(self):
        """Parse V<i>=<kind>[:<arg>] assignments."""
        bases = {}
        for item in self._option('base', []):
            name, _, assignment = item.partition('=')
            kind, _, arg = assignment.partition(':')
            if kind == UrysohnSpace.kind:
                space = UrysohnSpace(self._builder_for_run())
            elif kind == 'maxnorm-rd':
                space = builtin_space(kind, {'dim': int(arg or 1)})
            elif arg:
                space = space_from_json(load_json(arg))
            else:
                space = builtin_space(kind)
            bases[name.strip()] = space
        return bases

    @staticmethod
    def _domain_space(domain, bases):
        if isinstance(domain, Base):
            return [bases['V{}'.format(domain.index)]]
        if isinstance(domain, Product) and \
                all(isinstance(f, Base) for f in domain.factors):
            return [bases['V{}'.format(f.index)] for f in domain.factors]
        raise UnsupportedType(
            "Grid evaluation needs a base or product domain, got {}".format(
                domain)
        )

    def _grid(self, domain, bases):
        return grid_from_json(load_json(self.options['eval_grid']),
                              self._domain_space(domain, bases))

    def density(self):
        bases = self._bases()
        n = int(self.options['level'])
        p = self.config.precision
        interpreted = interpret_type(self.options['type_expr'], bases, n)
        points = enumerate_dense(interpreted.expr, bases,
                                 int(self._option('count', 10)))
        report = {
            'type': str(interpreted.expr),
            'level': n,
            'level_size': interpreted.level.size,
            'semiconvex': interpreted.semiconvex,
            'points': points,
        }
        if self._option('eval_grid') is not None:
            if not isinstance(interpreted.expr, Arrow):
                raise UnsupportedType("Only function types can be evaluated")
            grid = self._grid(interpreted.expr.domain, bases)
            report['grid'] = [_grid_value(x, p) for x in grid]
            report['evaluations'] = [
                [f(x).approx(p) for x in grid] for f in points
            ]

        return report, 0

    def check(self):
        report = run_suite(self.options['suite'], self.config,
                           bool(self.options.get('inject_fault')))

        return report.as_dict(), 0 if report.ok else 1


def _grid_value(x, p):
    if isinstance(x, tuple):
        return [xi.approx(p) for xi in x]
    return x.approx(p)
