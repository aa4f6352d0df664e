"""Serialization of command results as CSV or JSON.

Every value is written as a string: integers in decimal, rationals as
``num/den``, high-precision reals as decimal strings with 30 significant
digits. Nothing passes through a binary float.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

import mpmath

REAL_DIGITS = 30

COMMANDS = ("count", "radical", "normalize", "disc", "formula", "constant", "fit", "verify")


def fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, mpmath.ctx_mp_python.mpf):
        return mpmath.nstr(value, REAL_DIGITS, strip_zeros=False)
    if isinstance(value, float):
        return repr(value)
    if value is None:
        return ""
    return str(value)


def parse_rational(text: str) -> Fraction:
    """Inverse of :func:`fmt` for integers and rationals."""
    return Fraction(text)


@dataclass
class CountReport:
    command: str
    params: dict = field(default_factory=dict)
    rows: list = field(default_factory=list)
    columns: list | None = None
    extra: dict = field(default_factory=dict)
    wall_time: float | None = None
    # set when the command ran but found a failure; not serialized
    failure: str | None = None

    def add(self, **row):
        self.rows.append(row)

    def _columns(self) -> list[str]:
        if self.columns is not None:
            return list(self.columns)
        cols: list[str] = []
        for row in self.rows:
            cols += [c for c in row if c not in cols]
        return cols

    def to_dict(self) -> dict:
        cols = self._columns()
        out = {
            "command": self.command,
            "params": {k: fmt(v) for k, v in self.params.items()},
            "columns": cols,
            "rows": [{c: fmt(row.get(c)) for c in cols} for row in self.rows],
        }
        out.update(self.extra)
        if self.wall_time is not None:
            out["wall_time"] = f"{self.wall_time:.3f}"
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"

    def to_csv(self) -> str:
        cols = self._columns()
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(cols)
        for row in self.rows:
            writer.writerow([fmt(row.get(c)) for c in cols])
        return buf.getvalue()

    def render(self, fmt_name: str) -> str:
        return self.to_json() if fmt_name == "json" else self.to_csv()


def load_schema() -> dict:
    text = resources.files("multiquad").joinpath("report.schema.json").read_text()
    return json.loads(text)
