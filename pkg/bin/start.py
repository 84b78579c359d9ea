import os
import sys


def start_urysel():
    sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))
    from urysel import Runner
    from urysel.exceptions import ProviderError, ConfigError, \
        ConstructionError

    try:
        runner = Runner()
        sys.exit(runner.run())
    except (ConfigError, ProviderError, ConstructionError) as e:
        sys.exit('ERROR: {}'.format(e))
