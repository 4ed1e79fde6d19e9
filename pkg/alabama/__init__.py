"""
Alabama is a library and command line tool for Hamilton's (largest remainder)
apportionment method and the probability of the Alabama paradox.

Probabilities are obtained three ways: exact closed-form asymptotic values,
exact periodic values for integer populations, and simulation.
"""

import typing
from importlib import metadata

try:
    __version__ = metadata.version(__package__)
except metadata.PackageNotFoundError:
    __version__ = "0.0"
__version_info__ = tuple(int(i) for i in __version__.split(".") if i.isdigit())

from alabama.logger import AlabamaLogger

from alabama.database import AlabamaDatabase

# logger object
logger: AlabamaLogger = AlabamaLogger()

# module level log function, verbosity gated by db.verbosity
log: typing.Callable = logger.log

# run-wide settings
db: AlabamaDatabase = AlabamaDatabase()

# cleanup namespace
del metadata
del typing
del AlabamaLogger
del AlabamaDatabase
