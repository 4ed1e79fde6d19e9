"""
Contains the main alabama database class.
"""

import os
from typing import List

import psutil


class AlabamaDatabase(object):
    """
    The alabama database class, holding run-wide settings.
    """

    verbosity: int = 1
    """verbosity level for messages"""

    period_cap: int = 10**7
    """largest total population enumerated by periodic_exact"""

    phi_tol: float = 1e-12
    """truncation tolerance for the Poisson double series"""

    b_tol: float = 1e-4
    """agreement tolerance for the two estimates of b"""

    brute_max_states: int = 20
    """largest number of states for exhaustive enumeration"""

    block_size: int = 4096
    """number of house sizes per vectorised simulation block"""

    mc_chunk: int = 4096
    """number of Monte Carlo samples per random stream"""

    float_format: str = "%.10g"
    """float format for CSV output"""

    threads: int = 1
    """maximum number of worker threads"""

    parameters: object = None
    """parameters object"""

    # *************************************************************************
    # parameter table
    # *************************************************************************
    par_table: dict = {
        "verbosity": "verbosity",
        "periodcap": "period_cap",
        "phitol": "phi_tol",
        "btol": "b_tol",
        "brutemaxstates": "brute_max_states",
        "blocksize": "block_size",
        "mcchunk": "mc_chunk",
        "floatformat": "float_format",
        "threads": "threads",
    }
    """dict of parameter names and database attributes"""

    def __init__(self) -> None:
        self.threads = default_threads()

    def get(self, name: str):
        """
        Returns a database attribute by name.
        """

        return getattr(self, name)

    def set(self, name: str, value) -> None:
        """
        Sets a database attribute by name.
        """

        setattr(self, name, value)

        return

    def names(self) -> List[str]:
        """
        Returns the parameter names in the parameter table.
        """

        return list(self.par_table.keys())


def default_threads() -> int:
    """
    Return the default worker count.
    ALABAMA_THREADS caps the number of physical cores.
    """

    cores = psutil.cpu_count(logical=False) or 1

    cap = os.environ.get("ALABAMA_THREADS")
    if cap is not None:
        try:
            cores = max(1, min(cores, int(cap)))
        except ValueError:
            pass

    return cores
