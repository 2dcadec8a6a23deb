"""Figure specification: a small JSON file mapping CSV columns onto panels.

Example::

    {
      "inputs": ["trajectory.csv"],
      "layout": [2, 1],
      "x_axis": "n",
      "x_descending": true,
      "panels": [
        {"series": [{"input": 0, "column": "e1", "label": "e1"},
                    {"input": 0, "column": "e2", "label": "e2"}],
         "ylabel": "energy per site"},
        {"series": [{"input": 0, "column": "g"}], "ylabel": "coupling"}
      ],
      "output": "figure.png"
    }

Relative input/output paths are resolved against the spec file's directory,
so a spec can live next to the experiment artifacts it renders.
"""

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path

from .errors import EmptyInputError, MissingColumnError, SpecError


@dataclass(frozen=True)
class Series:
    input: int
    column: str
    label: str | None = None


@dataclass(frozen=True)
class Panel:
    series: tuple
    ylabel: str | None = None
    title: str | None = None
    logy: bool = False


@dataclass(frozen=True)
class FigureSpec:
    inputs: tuple
    layout: tuple            # (rows, cols)
    x_axis: str
    panels: tuple
    output: Path
    x_descending: bool = True

    @property
    def n_rows(self):
        return self.layout[0]

    @property
    def n_cols(self):
        return self.layout[1]


def _require(cond, message):
    if not cond:
        raise SpecError(message)


def load_spec(path) -> FigureSpec:
    path = Path(path)
    try:
        payload = json.loads(path.read_text())
    except OSError as exc:
        raise SpecError(f"cannot read spec file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SpecError(f"spec file {path} is not valid JSON: {exc}") from exc
    return parse_spec(payload, base_dir=path.parent)


def parse_spec(payload: dict, base_dir=".") -> FigureSpec:
    base = Path(base_dir)
    _require(isinstance(payload, dict), "spec must be a JSON object")
    for key in ("inputs", "layout", "x_axis", "panels", "output"):
        _require(key in payload, f"spec is missing the {key!r} field")

    inputs = payload["inputs"]
    _require(isinstance(inputs, list) and inputs, "inputs must be a nonempty list")
    resolved = tuple((base / p).resolve() if not Path(p).is_absolute() else Path(p)
                     for p in inputs)

    layout = payload["layout"]
    _require(
        isinstance(layout, list) and len(layout) == 2
        and all(isinstance(v, int) and v > 0 for v in layout),
        "layout must be [rows, cols] with positive integers",
    )

    raw_panels = payload["panels"]
    _require(isinstance(raw_panels, list) and raw_panels, "panels must be a nonempty list")
    _require(len(raw_panels) <= layout[0] * layout[1],
             f"{len(raw_panels)} panels do not fit a {layout[0]}x{layout[1]} grid")

    panels = []
    for i, rp in enumerate(raw_panels):
        series = rp.get("series", [])
        _require(isinstance(series, list) and series,
                 f"panel {i}: empty series selection")
        parsed = []
        for s in series:
            _require("column" in s, f"panel {i}: series entry without a column")
            idx = s.get("input", 0)
            _require(isinstance(idx, int) and 0 <= idx < len(resolved),
                     f"panel {i}: input index {idx} out of range")
            parsed.append(Series(input=idx, column=s["column"], label=s.get("label")))
        panels.append(Panel(
            series=tuple(parsed),
            ylabel=rp.get("ylabel"),
            title=rp.get("title"),
            logy=bool(rp.get("logy", False)),
        ))

    out = Path(payload["output"])
    if not out.is_absolute():
        out = (base / out).resolve()

    return FigureSpec(
        inputs=resolved,
        layout=(layout[0], layout[1]),
        x_axis=str(payload["x_axis"]),
        panels=tuple(panels),
        output=out,
        x_descending=bool(payload.get("x_descending", True)),
    )


def _to_float(cell):
    cell = cell.strip()
    if cell == "":
        return math.nan
    return float(cell)


def read_columns(path, wanted) -> dict:
    """Read the wanted columns of a CSV as float lists (blank cells -> nan)."""
    path = Path(path)
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for col in wanted:
            if col not in header:
                raise MissingColumnError(col, path)
        rows = list(reader)
    if not rows:
        raise EmptyInputError(f"input {path} has no data rows")
    out = {}
    for col in wanted:
        try:
            out[col] = [_to_float(r[col]) for r in rows]
        except ValueError as exc:
            raise SpecError(f"column {col!r} in {path} is not numeric: {exc}") from exc
    return out
