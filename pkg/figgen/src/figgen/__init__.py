"""Multi-panel figures from reduction-trajectory and gap-scan CSV files."""

__version__ = "0.1.0"

from .errors import EmptyInputError, FiggenError, MissingColumnError, SpecError
from .render import render
from .spec import FigureSpec, Panel, Series, load_spec, parse_spec, read_columns

__all__ = [
    "FigureSpec", "Panel", "Series", "load_spec", "parse_spec", "read_columns",
    "render", "FiggenError", "SpecError", "EmptyInputError", "MissingColumnError",
]
