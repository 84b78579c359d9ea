import logging


def logger():
    """
    Return a logger.
    """
    from urysel.providers.logger import BaseLogger

    logging.setLoggerClass(BaseLogger)
    logger = logging.getLogger('URYSEL')

    return logger


Logger = logger()
