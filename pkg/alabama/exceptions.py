"""
Contains custom exceptions and warnings used throughout alabama.

Each error class carries an `error_code` which the command line interface
uses as its exit code.
"""

import alabama


def warning(message: str) -> None:
    """
    Log a warning message.
    """

    try:
        alabama.logger.warning(message)
    except Exception:
        print(f"Warning: {message}")

    return


class AlabamaError(Exception):
    """
    Base custom error class for alabama.
    """

    def __init__(self, message: str, error_code: int = 0):
        """
        Custom error exception for alabama.

        Usage:  raise alabama.exceptions.AlabamaError(message)

        Args:
          message: string message to display when error is raised
          error_code: flag for code, from list below
          - 0 - no error
          - 2 - input error
          - 3 - tie unresolved
          - 4 - numeric non-convergence
        """

        super().__init__(message)

        self.error_code = 0
        if error_code is not None:
            self.error_code = error_code

        try:
            alabama.logger.log(f"{type(self).__name__}: {message}", level=2)
        except AttributeError:
            pass


class InputError(AlabamaError):
    """
    Malformed populations, shares or options.
    """

    def __init__(self, message: str):
        super().__init__(message, 2)


class PeriodTooLarge(InputError):
    """
    The period of a rational profile exceeds the enumeration cap.
    """


class TooManyStates(InputError):
    """
    Exhaustive enumeration requested for too many states.
    """


class WrongArity(InputError):
    """
    An operation defined for a fixed number of states got another number.
    """


class TieUnresolved(AlabamaError):
    """
    A tie at the rounding cutoff met the error-on-tie policy.
    """

    def __init__(self, message: str, tie_event=None):
        super().__init__(message, 3)

        #: the TieEvent which could not be resolved
        self.tie_event = tie_event


class NoConvergence(AlabamaError):
    """
    A numerical procedure did not reach the requested tolerance.
    """

    def __init__(self, message: str):
        super().__init__(message, 4)
