class FiggenError(Exception):
    """Base class for figure-generation errors."""


class SpecError(FiggenError):
    """Figure spec file is malformed or incomplete."""


class EmptyInputError(FiggenError):
    """An input CSV has no data rows."""


class MissingColumnError(FiggenError):
    """A requested column is absent from an input CSV."""

    def __init__(self, column, path):
        super().__init__(f"column {column!r} not present in {path}")
        self.column = column
        self.path = path
