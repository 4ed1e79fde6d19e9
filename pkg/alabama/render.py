"""
Text, JSON and CSV rendering of command results.
"""

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List

import numpy
import pandas

import alabama

FORMATS = ("text", "json", "csv")


@dataclass
class Rendered(object):
    """
    A command result: tables for text and CSV output, a document for JSON output.
    """

    tables: List[pandas.DataFrame] = field(default_factory=list)
    data: dict = field(default_factory=dict)
    titles: List[str] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    def add_table(self, frame: pandas.DataFrame, title: str = "") -> None:
        self.tables.append(frame)
        self.titles.append(title)

        return


def canonical(value):
    """
    Convert a value to plain JSON types. Fractions become "p/q" strings.
    """

    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, dict):
        return {str(k): canonical(v) for k, v in value.items()}
    if isinstance(value, (frozenset, set)):
        return [canonical(v) for v in sorted(value)]
    if isinstance(value, (list, tuple)):
        return [canonical(v) for v in value]
    if isinstance(value, pandas.DataFrame):
        return [canonical(r) for r in value.to_dict(orient="records")]
    if isinstance(value, numpy.ndarray):
        return [canonical(v) for v in value.tolist()]
    if isinstance(value, numpy.bool_):
        return bool(value)
    if isinstance(value, numpy.integer):
        return int(value)
    if isinstance(value, numpy.floating):
        return float(value)

    return value


def to_json(data: dict) -> str:
    """
    Canonical JSON: sorted keys, 2-space indent, trailing LF.
    Parsing the output and rendering it again gives identical text.
    """

    return json.dumps(canonical(data), sort_keys=True, indent=2) + "\n"


def to_csv(frame: pandas.DataFrame) -> str:
    """
    CSV with "," separator, "." decimal point and LF line endings.
    """

    return frame.to_csv(index=False, lineterminator="\n", float_format=alabama.db.float_format)


def to_text(frame: pandas.DataFrame) -> str:
    """
    Aligned text table.
    """

    if len(frame) == 0:
        return "(no rows)\n"

    return frame.to_string(index=False) + "\n"


def render(result: Rendered, fmt: str = "text") -> str:
    """
    Render a command result in the requested format.
    """

    if fmt == "json":
        return to_json(result.data)

    if fmt == "csv":
        return "\n".join(to_csv(frame) for frame in result.tables)

    blocks = []
    for title, frame in zip(result.titles, result.tables):
        text = to_text(frame)
        blocks.append(f"{title}\n{text}" if title else text)
    blocks.extend(note + "\n" for note in result.notes)

    return "\n".join(blocks)


def fraction_text(value) -> str:
    """
    Exact fractions as "p/q", floats in the database float format.
    """

    if isinstance(value, Fraction):
        return str(value)

    return alabama.db.float_format % value


def allocation_frame(profile, allocation) -> pandas.DataFrame:
    """
    Table of state, population, quota, seats and a `*` mark for rounded-up states.
    """

    quota = allocation.quota.values if allocation.quota is not None else [None] * profile.m

    return pandas.DataFrame(
        {
            "state": list(profile.state_names),
            "population": list(profile.populations),
            "quota": [round(float(q), 4) if q is not None else numpy.nan for q in quota],
            "seats": list(allocation.seats),
            "up": ["*" if i in allocation.rounded_up else "" for i in range(profile.m)],
        }
    )


def probability_frame(names, values, bounds=None) -> pandas.DataFrame:
    """
    Table of per-state probabilities, exact fractions kept as text.
    """

    frame = pandas.DataFrame(
        {
            "state": list(names),
            "q": [fraction_text(v) for v in values],
            "value": [float(v) for v in values],
        }
    )
    if bounds is not None:
        frame["error_bound"] = [float(b) for b in bounds]

    return frame
