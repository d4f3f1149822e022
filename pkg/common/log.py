"""Logging setup for the command-line front end.

Library modules only call ``logging.getLogger(__name__)``; handlers are
installed here, once, by the entry point.
"""

import logging

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def configure_logging(verbose=False):
    """
    Install a single stderr handler on the root logger.

    Parameters:
        verbose (bool): DEBUG level when True, WARNING otherwise.

    Side Effects:
        Replaces handlers previously installed by this function.
    """
    root = logging.getLogger()
    for handler in list(root.handlers):
        if getattr(handler, "_delay_spectra", False):
            root.removeHandler(handler)

    handler = logging.StreamHandler()
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    handler._delay_spectra = True
    root.addHandler(handler)
    root.setLevel(logging.DEBUG if verbose else logging.WARNING)
