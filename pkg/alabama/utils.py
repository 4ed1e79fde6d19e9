"""
*alabama.utils* contains general purpose support commands used throughout alabama.
"""

import json
import os
from fractions import Fraction
from typing import List, Tuple

import pandas

import alabama
import alabama.exceptions


def fix_path(path: str = "") -> str:
    """
    Makes a nice absolute path, leaving only forward slashes.

    Args:
        path: name of path to cleanup.
    Returns:
        cleaned path name.
    """

    pth = os.path.expanduser(path)
    pth = os.path.abspath(os.path.normpath(pth))
    pth = pth.replace("\\", "/")

    return pth


def get_datatype(value: any) -> list:
    """
    Determine the data type for an object and set the type if possible. A string such as "1.23"
    will result in a type "float" and "2" will result in type "int".

    Args:
        value: object to be typed
    Returns:
        list [type, value] of data type as a code and object with that type
    """

    if isinstance(value, str):
        value = value.strip()
        if value.lstrip("-").isdigit():
            return ["int", int(value)]
        try:
            return ["float", float(value)]
        except ValueError:
            pass
        attributetype = "str"

    elif isinstance(value, bool):
        attributetype = "int"
        value = int(value)

    elif isinstance(value, int):
        attributetype = "int"

    elif isinstance(value, float):
        attributetype = "float"

    else:
        attributetype = "str"

    return [attributetype, value]


def dequote(input: str) -> str:
    """
    Remove matching single or double quote at ends of input.

    Args:
        input: string to be dequoted.
    """

    if not isinstance(input, str):
        return input

    if input.startswith("'") and input.endswith("'"):
        dequote = input[1:-1]
    elif input.startswith('"') and input.endswith('"'):
        dequote = input[1:-1]
    else:
        dequote = input

    return dequote


def _split_list(text: str) -> List[str]:
    tokens = [t.strip() for t in dequote(text.strip()).split(",")]
    if len(tokens) == 0 or any(t == "" for t in tokens):
        raise alabama.exceptions.InputError(f"empty entry in list: {text!r}")

    return tokens


def parse_populations(text: str) -> List[int]:
    """
    Parse an inline population list such as "53,33,14".

    Args:
        text: comma separated positive integers
    Returns:
        list of populations
    """

    populations = []
    for tok in _split_list(text):
        try:
            value = int(tok)
        except ValueError:
            raise alabama.exceptions.InputError(f"population is not an integer: {tok!r}")
        populations.append(value)

    return populations


def parse_shares(text: str) -> List[Fraction]:
    """
    Parse decimal shares such as "0.45,0.35,0.20" into exact rationals.
    Decimal strings give denominators which are powers of ten, so there is
    no binary float rounding at parse time.

    Args:
        text: comma separated decimals or fractions ("1/3")
    Returns:
        list of Fractions
    """

    shares = []
    for tok in _split_list(text):
        try:
            value = Fraction(tok)
        except (ValueError, ZeroDivisionError):
            raise alabama.exceptions.InputError(f"share is not a decimal number: {tok!r}")
        shares.append(value)

    return shares


def parse_range(text: str) -> List[int]:
    """
    Parse an integer range "3..9", a list "3,10,20" or a single value "100".

    Args:
        text: range specification
    Returns:
        list of integers
    """

    text = text.strip()
    try:
        if ".." in text:
            first, last = text.split("..", 1)
            return list(range(int(first), int(last) + 1))
        return [int(t) for t in _split_list(text)]
    except ValueError:
        raise alabama.exceptions.InputError(f"bad integer range: {text!r}")


def read_profile_file(filename: str) -> Tuple[List[int], List[str] | None]:
    """
    Read populations (and optional names) from a JSON or CSV file.

    JSON: {"populations": [53, 33, 14], "names": ["A", "B", "C"]}
    CSV: one "name,population" pair per line, no header.

    Args:
        filename: name of profile file
    Returns:
        tuple of (populations, names)
    """

    filename = fix_path(filename)
    if not os.path.exists(filename):
        raise alabama.exceptions.InputError(f"profile file not found: {filename}")

    if filename.lower().endswith(".json"):
        try:
            with open(filename) as fp:
                data = json.load(fp)
            populations = [int(x) for x in data["populations"]]
            names = data.get("names")
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as e:
            raise alabama.exceptions.InputError(f"bad JSON profile {filename}: {e}")
    else:
        try:
            table = pandas.read_csv(
                filename,
                header=None,
                names=["name", "population"],
                dtype={"name": str},
                skipinitialspace=True,
            )
            populations = [int(x) for x in table["population"]]
            names = [str(x) for x in table["name"]]
        except (pandas.errors.ParserError, pandas.errors.EmptyDataError, ValueError) as e:
            raise alabama.exceptions.InputError(f"bad CSV profile {filename}: {e}")

    if names is not None and len(names) != len(populations):
        raise alabama.exceptions.InputError("number of names and populations differ")

    alabama.log(f"Read {len(populations)} states from {filename}", level=2)

    return populations, names
