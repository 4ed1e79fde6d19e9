import datetime
import os
import sys
from typing import List

import loguru

import alabama
import alabama.exceptions


class AlabamaLogger(object):
    """
    The alabama Logger class.
    """

    def __init__(self) -> None:
        self.logfile = "alabama.log"
        self.logger = loguru.logger
        self.use_logprefix = 1
        self.last_data = []  # data since last call to get_logdata
        self.last_data_max = 1024  # max entries in last_data buffer
        self.sinks = []

    def log(self, message: str, *args: List[str], prefix: str = "", level: int = 1):
        """
        Send a message to the logging system.

        Message is output to logger if level <= db.verbosity.
        Levels are:
        0 => silent
        1 => normal
        2 => extended info
        3 => debug

        Args:
            message: String message to be logged
            args: Additional string message to be logged
            prefix: Prefix to be prepended to logged message, ex: 'sim-> '
            level: verbosity level for output
        """

        # don't log if level > global verbosity
        try:
            verbosity = alabama.db.verbosity
        except AttributeError:
            verbosity = 1
        if level > verbosity:
            return

        message = str(message)  # better for exceptions

        # format message
        if len(args) == 1:
            message = message + " " + str(args[0])
        elif len(args) > 1:
            message = message + " " + " ".join(str(x) for x in args)

        if prefix != "" and self.use_logprefix:
            message = prefix + message

        # log eveything at INFO level
        self.logger.info(f"{message}")

        self.last_data.append(message)
        if len(self.last_data) > self.last_data_max:
            self.last_data = self.last_data[-self.last_data_max :]

        return

    def debug(self, message: str, *args, **kwargs):
        return self.logger.debug(message, *args, **kwargs)

    def info(self, message: str, *args, **kwargs):
        return self.logger.info(message, *args, **kwargs)

    def warning(self, message: str, *args, **kwargs):
        return self.logger.warning(message, *args, **kwargs)

    def error(self, message: str, *args, **kwargs):
        return self.logger.error(message, *args, **kwargs)

    def start_logging(self, logtype: str = "1", logfile: str | None = None, use_timestamp: bool = True):
        """
        Start the alabama logger.
        Console output goes to stderr so that stdout carries only rendered results.

        Args:
            logtype: code for loggers to start (1 console, 3 file - combine as '13')
            logfile: base filename of log file
            use_timestamp: append timestamp to logfile name
        """

        # remove default and previous sinks for customization
        try:
            self.logger.remove()
        except ValueError:
            pass
        self.sinks = []

        # console handler
        if "1" in logtype:
            sink = self.logger.add(
                sys.stderr,
                level="INFO",
                format="{message}",
                colorize=True,
            )
            self.sinks.append(sink)

        # rotating file handler
        if "3" in logtype:
            if logfile is None:
                if self.logfile is None:
                    raise alabama.exceptions.InputError("no logfile specified")
            else:
                self.logfile = logfile
            if use_timestamp:
                tt = datetime.datetime.strftime(datetime.datetime.now(), "%d%b%y_%H%M%S")
                s1, s2 = os.path.splitext(self.logfile)
                self.logfile = f"{s1}_{tt}{s2}"

            sink = self.logger.add(
                self.logfile,
                format="{time:DD-MMM-YY HH:mm:ss.SSS} | {level} | {message}",
                rotation="10 MB",
                retention="1 week",
            )
            self.sinks.append(sink)
            self.log(f"Logging to file {self.logfile}")

        return

    def get_logdata(self) -> List[str]:
        """
        Returns log data since the last call and clears the buffer.
        """

        buffer = self.last_data
        self.last_data = []

        return buffer
