"""
Effective constructions around the Urysohn universal metric space.

The computational options are as follows:
 - Urysohn space
   - rational Urysohn space U0 grown by bookkeeping
   - exact one-point extensions and ball intersection witnesses
   - embedding of effective spaces into U
 - Domain representation
   - formal balls, clusters and least ideals
   - extraction of points from cluster streams
 - Probabilistic selections
   - selection levels on effective spaces
   - lifting to function spaces of simple types
 - Invariant suites (check)
"""

from urysel.exceptions import UnknownSuite
from urysel.providers import Logger

__version__ = "0.1"


class Runner(object):
    def __init__(self, argv=None):
        self._provider = self._provider_factory(argv)

    @staticmethod
    def _provider_factory(argv=None):
        from urysel.providers.cmd import CmdProvider

        return CmdProvider(argv)

    @property
    def command(self):
        return self._provider.command

    def run(self):
        # print logo
        self._provider.logo()

        # set percentage counter
        Logger.set_progress(5)

        # load configuration
        self._provider.load()

        # must be called after initialization (!)
        from urysel.commands import CommandRunner

        runner = CommandRunner(self._provider)
        Logger.set_progress(95)
        try:
            code = runner.run()
        except UnknownSuite as e:
            Logger.error('{}'.format(e))
            return 2

        # save report
        Logger.set_progress(100)
        runner.save_output()

        # resets
        Logger.reset()

        return code
